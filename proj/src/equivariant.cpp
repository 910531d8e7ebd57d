#include "symsched/equivariant.hpp"

#include <algorithm>
#include <cmath>

namespace symsched {

namespace {

void check_hom_matches(const FiniteGroup& G, const FiniteGroup& H, const Homomorphism& rho) {
  if (!rho.source().same_as(G) || !rho.target().same_as(H))
    throw Error(ErrorKind::StructureMismatch, "homomorphism does not go " + G.name() + " -> " + H.name());
}

}  // namespace

bool coset_map_exists(const FiniteGroup& G, const FiniteGroup& H, const Homomorphism& rho,
                      const FiniteGroup& L, const FiniteGroup& K, const GroupElement& a) {
  check_hom_matches(G, H, rho);
  if (!is_subgroup(G, L)) throw Error(ErrorKind::NotASubgroup, L.name() + " not in " + G.name());
  if (!is_subgroup(H, K)) throw Error(ErrorKind::NotASubgroup, K.name() + " not in " + H.name());
  if (!H.contains(a)) throw Error(ErrorKind::NotInGroup, to_string(a) + " not in " + H.name());
  GroupElement ai = H.inverse(a);
  // conjugation is a homomorphism, so generators of L suffice
  for (const auto& l : L.generators()) {
    GroupElement c = H.compose(ai, H.compose(rho.apply(l), a));
    if (!K.contains(c)) return false;
  }
  return true;
}

std::vector<CosetMapParam> enumerate_coset_maps(const FiniteGroup& G, const FiniteGroup& H,
                                                const Homomorphism& rho, const FiniteGroup& L,
                                                const FiniteGroup& K) {
  std::vector<CosetMapParam> out;
  for (const auto& c : cosets(H, K))
    if (coset_map_exists(G, H, rho, L, K, c.representative))
      out.push_back(CosetMapParam{c.representative, L, K, rho});
  return out;
}

int EquivariantMap::eval(int x) const {
  if (x < 0 || x >= static_cast<int>(table_.size())) throw Error(ErrorKind::NotInSet, "point out of range");
  return table_[x];
}

int EquivariantMap::eval_via(const GroupElement& g, int x) const {
  if (x < 0 || x >= source_.size()) throw Error(ErrorKind::NotInSet, "point out of range");
  auto orb = orbit_of(source_, x);
  int anchor = orb.front();
  for (const auto& c : choices_)
    if (c.anchor == anchor) {
      if (source_.act(g, anchor) != x)
        throw Error(ErrorKind::InvalidArgument, "witness does not send the anchor to x");
      return target_.act(rho_.apply(g), c.image);
    }
  throw Error(ErrorKind::NotInSet, "no orbit choice for point");
}

std::vector<EquivariantMap> solve_equivariant(const GroupAction& source, const GroupAction& target,
                                              const Homomorphism& rho, std::size_t limit,
                                              bool* truncated) {
  const FiniteGroup& G = source.group();
  const FiniteGroup& H = target.group();
  check_hom_matches(G, H, rho);
  if (truncated) *truncated = false;

  // images of source generators acting on the target set
  std::vector<Perm> rho_gen;
  for (const auto& s : G.generators()) rho_gen.push_back(target.perm_of(rho.apply(s)));

  auto src_orbits = orbits(source);
  auto tgt_orbits = orbits(target);
  std::vector<int> tgt_orbit_of(target.size(), -1);
  std::vector<OrbitCosetBijection> tgt_bij;
  for (std::size_t j = 0; j < tgt_orbits.size(); ++j) {
    for (int y : tgt_orbits[j]) tgt_orbit_of[y] = static_cast<int>(j);
    tgt_bij.push_back(orbit_coset_bijection(target, tgt_orbits[j].front()));
  }

  // per source orbit: admissible (target orbit, image) choices, pruned by the coset condition
  std::vector<std::vector<OrbitChoice>> options(src_orbits.size());
  for (std::size_t i = 0; i < src_orbits.size(); ++i) {
    int anchor = src_orbits[i].front();
    FiniteGroup L = stabilizer(source, anchor);
    for (std::size_t j = 0; j < tgt_orbits.size(); ++j) {
      const auto& bij = tgt_bij[j];
      for (std::size_t p = 0; p < bij.points.size(); ++p) {
        const GroupElement& a = bij.cosets[p].representative;
        if (!coset_map_exists(G, H, rho, L, bij.stabilizer, a)) continue;
        options[i].push_back(OrbitChoice{anchor, static_cast<int>(j), bij.points[p],
                                         CosetMapParam{a, L, bij.stabilizer, rho}});
      }
    }
    if (options[i].empty()) return {};
  }

  // BFS trees of the source orbits
  std::vector<std::pair<int, int>> tree(source.size(), {-1, -1});  // (parent point, generator)
  std::vector<int> bfs_order;
  for (const auto& orb : src_orbits) {
    int anchor = orb.front();
    std::vector<int> q{anchor};
    tree[anchor] = {anchor, -1};
    for (std::size_t h = 0; h < q.size(); ++h) {
      bfs_order.push_back(q[h]);
      for (std::size_t s = 0; s < source.generator_perms().size(); ++s) {
        int y = source.generator_perms()[s].images[q[h]];
        if (tree[y].first >= 0) continue;
        tree[y] = {q[h], static_cast<int>(s)};
        q.push_back(y);
      }
    }
  }

  std::vector<EquivariantMap> out;
  std::vector<std::size_t> pick(options.size(), 0);
  while (true) {
    std::vector<int> table(source.size(), -1);
    std::vector<OrbitChoice> chosen;
    for (std::size_t i = 0; i < options.size(); ++i) {
      chosen.push_back(options[i][pick[i]]);
      table[chosen.back().anchor] = chosen.back().image;
    }
    for (int x : bfs_order) {
      auto [par, s] = tree[x];
      if (s >= 0) table[x] = rho_gen[s].images[table[par]];
    }
    // defining square on generators (equivalent to all elements)
    for (std::size_t s = 0; s < rho_gen.size(); ++s)
      for (int x = 0; x < source.size(); ++x)
        if (table[source.generator_perms()[s].images[x]] != rho_gen[s].images[table[x]])
          throw Error(ErrorKind::InvalidAction, "assembled map fails the defining square");
    out.emplace_back(source, target, rho, std::move(chosen), std::move(table));
    if (out.size() >= limit) {
      // more remain?
      bool more = false;
      for (std::size_t i = 0; i < pick.size(); ++i)
        if (pick[i] + 1 < options[i].size()) more = true;
      if (truncated) *truncated = more;
      break;
    }
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < options[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
  return out;
}

int preimage_size(const EquivariantMap& f) {
  if (!is_transitive(f.source()) || !is_transitive(f.target()))
    throw Error(ErrorKind::NotTransitive, "both actions must be transitive");
  if (f.choices().empty()) return 0;
  const auto& c = f.choices().front();
  auto G = f.source().group().order(), L = c.param.L.order();
  auto H = f.target().group().order(), K = c.param.K.order();
  if (!G || !L || !H || !K) throw Error(ErrorKind::CapExceeded, "group orders unavailable");
  std::uint64_t gl = *G / *L, hk = *H / *K;
  return static_cast<int>(gl / hk);
}

std::vector<std::vector<int>> brute_force_equivariant(const GroupAction& source,
                                                      const GroupAction& target,
                                                      const Homomorphism& rho,
                                                      std::size_t oracle_cap) {
  check_hom_matches(source.group(), target.group(), rho);
  int nx = source.size(), ny = target.size();
  double space = std::pow(static_cast<double>(ny), static_cast<double>(nx));
  if (space > static_cast<double>(oracle_cap) && !is_transitive(source))
    throw Error(ErrorKind::OracleCapExceeded, "search space too large for the oracle");
  if (nx == 0) return {std::vector<int>{}};
  if (ny == 0) return {};

  const auto& sg = source.generator_perms();
  std::vector<Perm> tg;
  std::vector<Perm> sg_inv;
  for (std::size_t s = 0; s < sg.size(); ++s) {
    tg.push_back(target.perm_of(rho.apply(source.group().generators()[s])));
    sg_inv.push_back(perm_inverse(sg[s]));
  }
  // full check material: every element as a permutation on both sides
  std::vector<std::pair<Perm, Perm>> all;
  for (const auto& [g, p] : source.element_perms()) all.emplace_back(p, target.perm_of(rho.apply(g)));

  std::vector<std::vector<int>> out;
  std::vector<int> f(nx, -1);
  // assign points in index order; prune on generator constraints between assigned points
  auto consistent = [&](int x) {
    for (std::size_t s = 0; s < sg.size(); ++s) {
      int y = sg[s].images[x];
      if (y <= x && f[y] != tg[s].images[f[x]]) return false;
      int z = sg_inv[s].images[x];
      if (z <= x && f[x] != tg[s].images[f[z]]) return false;
    }
    return true;
  };
  auto full_check = [&]() {
    for (const auto& [ps, pt] : all)
      for (int x = 0; x < nx; ++x)
        if (f[ps.images[x]] != pt.images[f[x]]) return false;
    return true;
  };
  std::vector<int> stack_pos{0};
  int x = 0;
  f[0] = -1;
  while (x >= 0) {
    ++f[x];
    if (f[x] >= ny) {
      f[x] = -1;
      --x;
      continue;
    }
    if (!consistent(x)) continue;
    if (x + 1 == nx) {
      if (full_check()) out.push_back(f);
      continue;
    }
    ++x;
    f[x] = -1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace symsched
