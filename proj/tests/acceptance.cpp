// One PASS/FAIL line per acceptance criterion, with the measured numbers.
//
// A criterion whose literal claim is false prints FAIL together with the
// counterexample and the corrected statement it was checked against. Such a
// line counts as explained when the counterexample reproduces and the
// corrected statement holds; the exit status is the number of unexplained
// failures, so ctest still catches regressions.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "corpus.hpp"
#include "oracles.hpp"
#include "symsched/cli.hpp"
#include "symsched/serialize.hpp"
#include "symsched/simulate.hpp"

using namespace symsched;

namespace {

struct Outcome {
  bool pass = true;
  bool explained = false;  // literal claim refuted, corrected claim verified
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& s) { notes.push_back("     " + s); }
};

std::string fmt(const ClassCost& c) {
  std::ostringstream o;
  o << "{";
  bool first = true;
  for (const auto& [k, v] : c) {
    o << (first ? "" : ", ") << k << ": " << v;
    first = false;
  }
  o << "}";
  return o.str();
}

int unexplained = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.check(false, std::string("threw: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fs, limit %.0fs", secs, limit_s);
  o.check(secs < limit_s, buf);
  std::printf("criterion %2d: %s  %s%s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(),
              !o.pass && o.explained ? "  (literal claim refuted; corrected claim holds)" : "");
  for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
  if (!o.pass && !o.explained) ++unexplained;
  std::fflush(stdout);
}

int md(long long a, int q) { return static_cast<int>(((a % q) + q) % q); }

// --- criterion 1 -----------------------------------------------------------

Outcome cannon_reproduction() {
  Outcome o;
  const char* argv[] = {"symsched", "preset", "cannon", "--q", "3"};
  std::ostringstream out, err;
  int rc = run_cli(5, argv, out, err);
  o.check(rc == kExitClean, "preset cannon --q 3 exits 0");
  json doc = json::parse(out.str());
  ScheduleBundle b = bundle_from_json(doc["bundle"]);
  const json& r = doc["report"];
  o.check(r["violations"].empty(), "zero violations");
  o.check(r["coverage"] == 27, "coverage " + r["coverage"].dump());
  o.check(r["makespan"] == 3, "makespan " + r["makespan"].dump() + " steps");

  const int q = 3;
  bool skew = true;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) skew = skew && b.placement[0].steps[0][b.dims.var_id(0, i, j, 0)] == i * q + md(j - i, q);
  o.check(skew, "A_ij starts at node (i, j-i): rows shifted left by their index");

  MachineModel m = build_machine(b.machine);
  for (int g = 0; g + 1 < b.placement_steps(); ++g) {
    long long a = class_sum(traffic_delta(b.placement[0].steps[g], b.placement[0].steps[g + 1], m));
    long long bb = class_sum(traffic_delta(b.placement[1].steps[g], b.placement[1].steps[g + 1], m));
    long long c = class_sum(traffic_delta(b.placement[2].steps[g], b.placement[2].steps[g + 1], m));
    o.check(a == 9 && bb == 9 && c == 0, "transition " + std::to_string(g) + ": A " + std::to_string(a) + ", B " +
                                             std::to_string(bb) + ", C " + std::to_string(c) + " hop-units");
  }
  return o;
}

// --- criteria 2, 3 ---------------------------------------------------------

Outcome fat_tree_base() {
  Outcome o;
  CostReport r = verify(fat_tree_recursive(1));
  o.check(r.clean(), "zero violations");
  long long top = r.traffic.count("tree-level-2") ? r.traffic.at("tree-level-2") : 0;
  long long low = r.traffic.count("tree-level-1") ? r.traffic.at("tree-level-1") : 0;
  o.check(top == 4, "top link " + std::to_string(top));
  o.check(low == 8, "lower links " + std::to_string(low));
  return o;
}

Outcome fat_tree_recursion() {
  Outcome o;
  const int d = 2, n = 1 << d;
  CostReport r = verify(fat_tree_recursive(d));
  o.check(r.clean(), "zero violations, 16 processors");
  auto get = [&](int lv) {
    auto k = "tree-level-" + std::to_string(lv);
    return r.traffic.count(k) ? r.traffic.at(k) : 0LL;
  };
  o.check(get(2 * d) == n * n, "level-4 links " + std::to_string(get(2 * d)) + " = n^2");
  o.check(get(2 * d - 1) == 2 * n * n, "level-3 links " + std::to_string(get(2 * d - 1)) + " = 2n^2");
  o.note("all classes " + fmt(r.traffic));
  return o;
}

// --- criterion 4 -----------------------------------------------------------

Outcome two_and_half_d() {
  Outcome o;
  ScheduleBundle b = schedule_2_5d(4, 64, 4);
  CostReport r = verify(b);
  o.check(r.clean(), "n=4 p=64 c=4: zero violations");
  o.check(check_consistency(b).empty(), "homomorphisms consistent with the placements");
  bool four = true;
  int main_steps = 0;
  for (int g = 0; g < b.placement_steps(); ++g) {
    if (b.phases[g] != "main") continue;
    ++main_steps;
    for (int s = 0; s < 3; ++s) {
      const auto& pl = b.placement[s];
      for (int v = 0; v < b.dims.set_size(s); ++v) {
        int present = 0;
        for (int c = 0; c < pl.copies; ++c) present += pl.steps[g][v * pl.copies + c] >= 0;
        four = four && present == 4;
      }
    }
  }
  o.check(four && main_steps > 0, "4 resident copies of every A, B, C variable on " + std::to_string(main_steps) +
                                      " main step(s)");

  // blocked Cannon on p=64, c=1 is an 8x8 torus, which needs 8 | n; n=4 has no such
  // comparator, so the per-node comparison runs at n=8 where both exist
  try {
    cannon_blocked(4, 4, 4, 8);
    o.check(false, "n=4 blocked Cannon on 64 nodes should be infeasible");
  } catch (const Error&) {
    o.note("n=4 on an 8x8 torus is infeasible (8 does not divide 4); comparing at n=8");
  }
  CostReport lay = verify(schedule_2_5d(8, 64, 4));
  CostReport blk = verify(cannon_blocked(8, 8, 8, 8));
  o.check(lay.clean() && blk.clean(), "n=8: both runs clean");
  auto cmp = compare_cost(lay, blk, true);
  o.check(cmp.max_node_sent_main_delta < 0,
          "max per-node main-phase traffic 2.5D " + std::to_string(lay.max_node_sent_main) + " < blocked Cannon " +
              std::to_string(blk.max_node_sent_main));
  o.note("including prologue and epilogue: 2.5D " + std::to_string(lay.max_node_sent) + ", blocked Cannon " +
         std::to_string(blk.max_node_sent));
  return o;
}

// --- criteria 5, 7 ---------------------------------------------------------

std::set<std::vector<int>> tables(const std::vector<EquivariantMap>& maps) {
  std::set<std::vector<int>> out;
  for (const auto& m : maps) out.insert(m.table());
  return out;
}

int fixed_points(const corpus::Case& c, int x0) {
  FiniteGroup L = stabilizer(c.source, x0);
  int n = 0;
  for (int y = 0; y < c.target.size(); ++y) {
    bool ok = true;
    for (const auto& l : L.enumerate()) ok = ok && c.target.act(c.rho.apply(l), y) == y;
    n += ok;
  }
  return n;
}

Outcome solver_oracle() {
  Outcome o;
  auto cases = corpus::build();
  int equal = 0, transitive = 0, law_ok = 0, corrected_ok = 0;
  std::string counter;
  for (const auto& c : cases) {
    auto maps = solve_equivariant(c.source, c.target, c.rho);
    auto brute = brute_force_equivariant(c.source, c.target, c.rho);
    if (tables(maps) == std::set<std::vector<int>>(brute.begin(), brute.end()) && maps.size() == brute.size())
      ++equal;
    else
      o.check(false, "set mismatch on " + c.name);
    if (brute.empty() || !is_transitive(c.source) || !is_transitive(c.target)) continue;
    ++transitive;
    auto H = c.target.group().order();
    auto K = stabilizer(c.target, 0).order();
    long long hk = static_cast<long long>(*H / *K);
    if (static_cast<long long>(brute.size()) == hk) ++law_ok;
    else if (counter.empty())
      counter = c.name + ": " + std::to_string(brute.size()) + " maps, |H|/|K| = " + std::to_string(hk);
    if (static_cast<int>(brute.size()) == fixed_points(c, 0)) ++corrected_ok;
  }
  o.check(equal == static_cast<int>(cases.size()),
          "solver set equals brute-force set on " + std::to_string(equal) + "/" + std::to_string(cases.size()) +
              " corpus cases (orders <= 24, <= 8 points)");
  bool literal = law_ok == transitive;
  o.check(literal, "count |H|/|K| on nonempty transitive cases: " + std::to_string(law_ok) + "/" +
                       std::to_string(transitive));
  if (!literal) o.note("counterexample " + counter);
  bool corrected = corrected_ok == transitive;
  o.note(std::string(corrected ? "holds" : "FAILS") + ": count = #points of Y fixed by rho(stab(x0)), " +
         std::to_string(corrected_ok) + "/" + std::to_string(transitive));
  o.explained = !literal && corrected && equal == static_cast<int>(cases.size());
  return o;
}

Outcome preimage_law() {
  Outcome o;
  int maps_seen = 0, literal_ok = 0, corrected_ok = 0, lib_ok = 0, surj = 0;
  std::string counter;
  for (const auto& c : corpus::build()) {
    if (!is_transitive(c.source) || !is_transitive(c.target)) continue;
    for (const auto& m : solve_equivariant(c.source, c.target, c.rho)) {
      ++maps_seen;
      int X = c.source.size(), Y = c.target.size();
      // |G/L| / |H/K| with L, K point stabilizers
      long long gl = static_cast<long long>(*c.source.group().order() / *stabilizer(c.source, 0).order());
      long long hk = static_cast<long long>(*c.target.group().order() / *stabilizer(c.target, 0).order());
      std::vector<int> fiber(Y, 0);
      for (int x = 0; x < X; ++x) ++fiber[m.eval(x)];
      bool lit = true, cor = true;
      for (int y = 0; y < Y; ++y) {
        lit = lit && fiber[y] * hk == gl;
        // ρ(G)-orbit of y inside Y
        std::set<int> orb;
        for (const auto& g : c.source.group().enumerate()) orb.insert(c.target.act(c.rho.apply(g), y));
        bool hit = fiber[y] > 0;
        cor = cor && (hit ? fiber[y] * static_cast<int>(orb.size()) == X : true);
      }
      bool onto = true;
      for (int y = 0; y < Y; ++y) onto = onto && fiber[y] > 0;
      surj += onto;
      literal_ok += lit;
      corrected_ok += cor;
      if (!lit && counter.empty()) {
        std::ostringstream s;
        s << c.name << ": fibers";
        for (int n : fiber) s << " " << n;
        s << ", |G/L|/|H/K| = " << gl << "/" << hk;
        counter = s.str();
      }
      if (onto) lib_ok += preimage_size(m) == fiber[0];
    }
  }
  bool literal = literal_ok == maps_seen;
  o.check(literal, "every fiber of every transitive map equals |G/L|/|H/K|: " + std::to_string(literal_ok) + "/" +
                       std::to_string(maps_seen));
  if (!literal) o.note("counterexample " + counter);
  bool corrected = corrected_ok == maps_seen && lib_ok == surj;
  o.note(std::string(corrected ? "holds" : "FAILS") + ": fiber over an image point y is |X|/|rho(G)y|, " +
         std::to_string(corrected_ok) + "/" + std::to_string(maps_seen) + "; equals |G/L|/|H/K| on all " +
         std::to_string(surj) + " surjective maps");
  o.explained = !literal && corrected;
  return o;
}

// --- criterion 6 -----------------------------------------------------------

Outcome cyclic_homs() {
  Outcome o;
  bool imp_ok = true, cyc_ok = true, enum_ok = true, scoped_ok = true, literal_ok = true;
  std::string counter;
  int groups = 0, homs = 0;
  for (int q : {3, 5}) {
    auto subs = oracle::subgroups(q);
    groups += static_cast<int>(subs.size());
    for (const auto& G : subs) {
      auto elems = G.enumerate();
      auto all = oracle::closure(q, [&] {
        std::vector<std::vector<int>> g;
        for (const auto& x : G.generators()) g.push_back(G.as_perm(x).images);
        return g;
      }());
      for (int t = 1; t <= 2 * q; ++t) {
        FiniteGroup Z = cyclic(t);
        std::set<std::vector<long long>> brute_prim;
        oracle::for_each_image_tuple(G, Z, [&](const std::vector<GroupElement>& imgs) {
          if (!oracle::is_hom(G, Z, imgs)) return;
          Homomorphism h = make_hom(G, Z, imgs);
          bool nontrivial = false, prim_out = false;
          for (const auto& g : elems) {
            bool moved = h.apply(g) != Z.identity();
            nontrivial = nontrivial || moved;
            Perm p = G.as_perm(g);
            if (!moved) continue;
            if (is_primitive(p)) {
              prim_out = true;
              // every element of G is a power of this primitive one
              if (t == q && oracle::closure(q, {p.images}) != all) cyc_ok = false;
            } else if (t == q) {
              imp_ok = false;
            }
          }
          if (nontrivial) ++homs;
          if (t % q != 0 && nontrivial && literal_ok) {
            literal_ok = false;
            std::ostringstream s;
            s << "subgroup of order " << *G.order() << " in S" << q << " -> Z/" << t << " with generator images";
            for (const auto& x : imgs) s << " " << x.modvec().r[0];
            counter = s.str();
          }
          if (t % q != 0 && prim_out) scoped_ok = false;
          if (prim_out) {
            std::vector<long long> key;
            for (const auto& x : imgs) key.push_back(x.modvec().r[0]);
            brute_prim.insert(key);
          }
        });
        std::set<std::vector<long long>> got;
        for (const auto& c : enumerate_homs_to_cyclic(G, q, t)) {
          std::vector<long long> key;
          for (const auto& x : c.hom.images()) key.push_back(x.modvec().r[0]);
          got.insert(key);
        }
        if (got != brute_prim) enum_ok = false;
        if (t % q != 0 && !got.empty()) enum_ok = false;
      }
    }
  }
  o.note(std::to_string(groups) + " subgroups of S3 and S5, targets Z/t for t <= 2q, " + std::to_string(homs) +
         " nontrivial homs found by brute force");
  o.check(enum_ok, "enumerate_homs_to_cyclic equals the brute-force set of homs with a primitive element outside the kernel");
  o.check(imp_ok, "homs to Z/q: every imprimitive element lies in the kernel");
  o.check(cyc_ok, "homs to Z/q: a primitive element outside the kernel generates the whole subgroup");
  o.check(literal_ok, "no nontrivial hom to Z/t when q does not divide t");
  if (!literal_ok) o.note("counterexample " + counter + " (a sign character)");
  o.note(std::string(scoped_ok ? "holds" : "FAILS") +
         ": when q does not divide t, no hom to Z/t moves a primitive element");
  o.explained = !literal_ok && scoped_ok && enum_ok && imp_ok && cyc_ok;
  return o;
}

// --- criterion 8 -----------------------------------------------------------

struct Mu {
  std::array<int, 2> mu1, mu2, mut;
};

Outcome torus_sweep() {
  Outcome o;
  const int q = 3;
  std::vector<Mu> mus;
  for (int c = 0; c < 729; ++c) {
    int v = c;
    Mu m;
    for (int* p : {&m.mu1[0], &m.mu1[1], &m.mu2[0], &m.mu2[1], &m.mut[0], &m.mut[1]}) {
      *p = v % q;
      v /= q;
    }
    mus.push_back(m);
  }
  long long mismatches = 0, accepted_full = 0, bundles = 0, clean = 0, calls = 0;
  std::string first_mismatch;
  std::array<std::array<int, 3>, 3> rows{};
  for (int code = 0; code < 19683; ++code) {
    int v = code;
    for (auto& r : rows)
      for (int& x : r) {
        x = v % q;
        v /= q;
      }
    // pointwise oracle over the 27 instructions
    std::array<std::array<int, 3>, 27> img{};
    std::set<std::array<int, 3>> distinct;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        for (int k = 0; k < q; ++k) {
          int idx[3] = {i, j, k};
          std::array<int, 3> p{};
          for (int a = 0; a < 3; ++a) p[a] = md(rows[0][a] * i + rows[1][a] * j + rows[2][a] * k, q);
          img[(i * q + j) * q + k] = p;
          distinct.insert(p);
          (void)idx;
        }
    bool embeds = distinct.size() == 27;
    auto set_ok = [&](int s, const Mu& m) {
      auto roles = set_index_roles(s);
      for (int x = 0; x < 27; ++x) {
        int idx[3] = {x / 9, (x / 3) % 3, x % 3};
        int a = idx[roles[0]], b = idx[roles[1]];
        const auto& p = img[x];
        for (int ax = 0; ax < 2; ++ax)
          if (md(m.mu1[ax] * a + m.mu2[ax] * b + m.mut[ax] * p[2], q) != p[ax]) return false;
      }
      std::set<std::pair<int, int>> spots;
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
          spots.insert({md(m.mu1[0] * a + m.mu2[0] * b, q), md(m.mu1[1] * a + m.mu2[1] * b, q)});
      return spots.size() == 9u;
    };
    std::array<std::vector<int>, 3> acc;
    for (int s = 0; s < 3; ++s)
      for (int c = 0; c < 729; ++c)
        if (set_ok(s, mus[c])) acc[s].push_back(c);

    TorusHomParams p;
    p.rows = rows;
    auto put = [&](int s, const Mu& m) { p.mu[s] = {m.mu1, m.mu2, m.mut}; };
    for (int s = 0; s < 3; ++s) put(s, mus[acc[s].empty() ? 0 : acc[s][0]]);
    for (int s = 0; s < 3; ++s) {
      bool others = true;
      for (int u = 0; u < 3; ++u)
        if (u != s) others = others && !acc[u].empty();
      std::vector<bool> ok_here(729, false);
      for (int c : acc[s]) ok_here[c] = true;
      for (int c = 0; c < 729; ++c) {
        put(s, mus[c]);
        bool lib = !torus_params_failure(q, p).has_value();
        bool want = embeds && others && ok_here[c];
        ++calls;
        if (lib != want) {
          ++mismatches;
          if (first_mismatch.empty())
            first_mismatch = "rows code " + std::to_string(code) + " set " + set_name(s) + " mu code " + std::to_string(c);
        }
      }
      put(s, mus[acc[s].empty() ? 0 : acc[s][0]]);
    }
    if (!embeds) continue;
    for (int a : acc[0])
      for (int b : acc[1])
        for (int c : acc[2]) {
          ++accepted_full;
          put(0, mus[a]);
          put(1, mus[b]);
          put(2, mus[c]);
          ScheduleBundle bun = torus_schedule(q, p);
          ++bundles;
          clean += verify(bun).clean() && check_consistency(bun).empty();
        }
  }
  o.check(mismatches == 0, "library acceptance equals the pointwise identity and embedding oracle on " +
                               std::to_string(calls) + " (rows, set, mu) triples");
  if (mismatches) o.note("first mismatch " + first_mismatch);
  o.check(clean == bundles && bundles > 0, std::to_string(clean) + "/" + std::to_string(bundles) +
                                               " accepted parameter sets replay with zero violations and consistent homs");
  o.note(std::to_string(accepted_full) + " accepted parameter sets out of 3^9 row choices");
  return o;
}

// --- criterion 9 -----------------------------------------------------------

Outcome hex() {
  Outcome o;
  const int q = 3;
  ScheduleBundle b = hex_systolic(q);
  CostReport r = verify(b);
  o.check(r.clean(), "zero violations");
  o.check(b.time.levels == std::vector<int>{3 * q} && r.makespan <= 3 * q,
          "runs within the 3q = 9 step window (makespan " + std::to_string(r.makespan) + ")");
  const HomRecord* rec = b.find_hom("rho");
  o.check(rec != nullptr, "bundle carries rho");
  if (!rec) return o;
  const Homomorphism& rho = rec->hom;
  const auto& gens = rho.source().generators();
  std::vector<GroupElement> want{hex_g2(), rho.target().factors()[0].inverse(hex_g1()), hex_g3()};
  for (int r2 = 0; r2 < 3; ++r2)
    o.check(rho.apply(gens[r2]).product().parts[0] == want[r2],
            std::string("shift in ") + "ijk"[r2] + " maps to " + std::array<const char*, 3>{"g2", "-g1", "g3"}[r2]);
  // a stream never sees the index it lacks, so it moves along that index's image
  MachineModel m = build_machine(b.machine);
  for (int s = 0; s < 3; ++s) {
    int missing = set_index_roles(s)[2];
    ClassCost step = m.link_cost(want[missing]);
    bool along = !r.per_set[s].empty();
    for (const auto& [k, v] : r.per_set[s]) along = along && step.count(k);
    o.check(along, std::string("stream ") + set_name(s) + " moves only along " + fmt(step) + ": " + fmt(r.per_set[s]));
  }
  return o;
}

// --- criterion 10 ----------------------------------------------------------

void recursive_order(int i, int j, int k, int size, int n, std::vector<int>& out) {
  if (size == 1) {
    out.push_back((i * n + j) * n + k);
    return;
  }
  int h = size / 2;
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj)
      for (int dk = 0; dk < 2; ++dk) recursive_order(i + di * h, j + dj * h, k + dk * h, h, n, out);
}

Outcome pmh_bound() {
  Outcome o;
  for (const auto& levels : {std::vector<PmhLevel>{{12, 1}}, std::vector<PmhLevel>{{12, 1}, {48, 1}}}) {
    ScheduleBundle b = pmh_space_bounded(levels);
    int n = b.dims.l;
    std::vector<int> ref;
    recursive_order(0, 0, 0, n, n, ref);
    std::map<long long, int> by_clock;
    for (const auto& s : b.slots) by_clock[b.time.clock(s.time)] = b.dims.instr_id(s.i, s.j, s.k);
    std::vector<int> got;
    for (const auto& [c, x] : by_clock) got.push_back(x);
    o.check(got == ref && verify(b).clean(), "sequential " + std::to_string(levels.size()) + "-level, n=" +
                                                 std::to_string(n) + ": instruction order equals the recursive order");
  }

  // two levels, 8 level-1 caches of M1 = 12 words under one 192-word memory
  const long long M1 = 12;
  ScheduleBundle b = pmh_space_bounded({{M1, 1}, {192, 8}});
  CostReport r = verify(b);
  o.check(r.clean(), "two-level n=8 instance: zero violations");
  MachineModel m = build_machine(b.machine);
  // a level-1 subtask fits three side-s blocks in M1; it runs s^3 steps
  int side = 1;
  while (3 * (side + 1) * (side + 1) <= M1) ++side;
  const int span = side * side * side;
  std::map<std::pair<int, int>, long long> per;  // (superstep, cache) -> words across its boundary
  for (int g = 0; g + 1 < b.placement_steps(); ++g) {
    int sup = (g + 1) / span;
    for (const auto& pl : b.placement)
      for (std::size_t v = 0; v < pl.steps[g].size(); ++v) {
        int from = pl.steps[g][v], to = pl.steps[g + 1][v];
        if (from < 0 || to < 0 || from == to) continue;
        ClassCost c = m.move_cost(from, to);
        long long h = c.count("level-1") ? c.at("level-1") : 0;
        if (!h) continue;
        bool pf = m.is_processor(from), pt = m.is_processor(to);
        if (pf && pt) {
          per[{sup, from}] += h / 2;
          per[{sup, to}] += h - h / 2;
        } else if (pf) {
          per[{sup, from}] += h;
        } else if (pt) {
          per[{sup, to}] += h;
        }
      }
  }
  long long worst = 0;
  for (const auto& [k, w] : per) worst = std::max(worst, w);
  o.check(worst <= 3 * M1, "worst level-1 boundary traffic of one cache in one " + std::to_string(span) +
                               "-step superstep: " + std::to_string(worst) + " words <= 3*M1 = " + std::to_string(3 * M1));
  return o;
}

// --- criterion 11 ----------------------------------------------------------

Outcome round_trip() {
  Outcome o;
  std::vector<ScheduleBundle> all{cannon(3),
                                  cannon(5),
                                  cannon_blocked(6, 6, 6, 3),
                                  schedule_2_5d(4, 64, 4),
                                  schedule_2_5d(8, 64, 4),
                                  fat_tree_recursive(1),
                                  fat_tree_recursive(2),
                                  pmh_space_bounded({{12, 1}}),
                                  pmh_space_bounded({{12, 1}, {192, 8}}),
                                  hex_systolic(3)};
  int same = 0;
  for (const auto& b : all) {
    std::string text = bundle_to_json(b).dump();
    ScheduleBundle back = bundle_from_json(json::parse(text));
    std::string r0 = report_to_json(verify(b)).dump(), r1 = report_to_json(verify(back)).dump();
    bool ok = r0 == r1 && bundle_to_json(back).dump() == text;
    same += ok;
    if (!ok) o.check(false, b.preset + " changed across export/import");
  }
  o.check(same == static_cast<int>(all.size()),
          std::to_string(same) + "/" + std::to_string(all.size()) + " preset bundles give byte-identical reports");
  return o;
}

}  // namespace

int main() {
  criterion(1, "Cannon reproduction", 1, cannon_reproduction);
  criterion(2, "fat-tree base case", 1, fat_tree_base);
  criterion(3, "fat-tree recursion", 5, fat_tree_recursion);
  criterion(4, "2.5D feasibility and consistency", 10, two_and_half_d);
  criterion(5, "solver-oracle equivalence", 300, solver_oracle);
  criterion(6, "homomorphisms to cyclic groups", 120, cyclic_homs);
  criterion(7, "preimage law", 60, preimage_law);
  criterion(8, "torus commuting condition", 120, torus_sweep);
  criterion(9, "hex systolic", 1, hex);
  criterion(10, "PMH space bound", 10, pmh_bound);
  criterion(11, "round trip", 60, round_trip);
  std::printf("unexplained failures: %d\n", unexplained);
  return unexplained;
}
