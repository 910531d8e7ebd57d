#include "symsched/actions.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace symsched {

int ActionSet::index_of(const std::string& p) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == p) return static_cast<int>(i);
  throw Error(ErrorKind::NotInSet, p + " not in " + label);
}

ActionSet ActionSet::range(const std::string& label, int n) {
  ActionSet s{label, {}};
  for (int i = 0; i < n; ++i) s.points.push_back(std::to_string(i));
  return s;
}

GroupAction::GroupAction(FiniteGroup group, ActionSet set, std::vector<Perm> generator_perms)
    : group_(std::move(group)), set_(std::move(set)), gens_(std::move(generator_perms)) {
  if (gens_.size() != group_.generators().size())
    throw Error(ErrorKind::InvalidAction, "need one point permutation per generator");
  {
    std::unordered_set<std::string> seen(set_.points.begin(), set_.points.end());
    if (seen.size() != set_.points.size())
      throw Error(ErrorKind::InvalidAction, "duplicate point identifiers in " + set_.label);
  }
  for (const auto& p : gens_)
    if (p.degree() != set_.size() || !perm_valid(p))
      throw Error(ErrorKind::InvalidAction, "generator does not permute " + set_.label);
  // an action is a homomorphism into Sym(points)
  try {
    if (auto fail = hom_failure(group_, symmetric(std::max(1, set_.size())),
                                set_.size() == 0 ? std::vector<GroupElement>(gens_.size(), Perm::identity(1))
                                                 : std::vector<GroupElement>(gens_.begin(), gens_.end())))
      throw Error(ErrorKind::InvalidAction, "not a group action: " + *fail);
    validated_ = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CapExceeded) throw;
  }
}

GroupAction GroupAction::from_rule(const FiniteGroup& group, const ActionSet& set,
                                   const std::function<int(const GroupElement&, int)>& rule) {
  std::vector<Perm> perms;
  for (const auto& g : group.generators()) {
    Perm p;
    p.images.resize(set.size());
    for (int x = 0; x < set.size(); ++x) {
      int y = rule(g, x);
      if (y < 0 || y >= set.size()) throw Error(ErrorKind::InvalidAction, "rule leaves the set");
      p.images[x] = y;
    }
    perms.push_back(std::move(p));
  }
  return GroupAction(group, set, std::move(perms));
}

GroupAction GroupAction::natural(const FiniteGroup& group) {
  return from_rule(group, ActionSet::range(group.name(), group.degree()),
                   [&group](const GroupElement& g, int x) { return group.act(g, x); });
}

GroupAction GroupAction::regular(const FiniteGroup& group) {
  auto elems = group.enumerate();
  ActionSet s{group.name(), {}};
  for (const auto& e : elems) s.points.push_back(to_string(e));
  return from_rule(group, s, [&](const GroupElement& g, int x) {
    GroupElement h = group.compose(g, elems[x]);
    return static_cast<int>(std::lower_bound(elems.begin(), elems.end(), h) - elems.begin());
  });
}

Perm GroupAction::perm_of(const GroupElement& g) const {
  Perm acc = Perm::identity(set_.size());
  for (const auto& [s, k] : group_.express(g)) {
    const Perm& p = gens_.at(s);
    Perm pk = Perm::identity(set_.size());
    Perm base = k < 0 ? perm_inverse(p) : p;
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) pk = perm_compose(base, pk);
    acc = perm_compose(acc, pk);
  }
  return acc;
}

int GroupAction::act(const GroupElement& g, int x) const {
  if (x < 0 || x >= set_.size()) throw Error(ErrorKind::NotInSet, "point out of range");
  return perm_of(g).images[x];
}

std::vector<std::pair<GroupElement, Perm>> GroupAction::element_perms() const {
  auto ww = group_.enumerate_with_words();
  std::unordered_map<GroupElement, std::size_t, ElementHash> index;
  std::vector<std::pair<GroupElement, Perm>> out;
  out.reserve(ww.size());
  for (std::size_t i = 0; i < ww.size(); ++i) {
    index.emplace(ww[i].first, i);
    const Word& w = ww[i].second;
    if (w.empty()) {
      out.emplace_back(ww[i].first, Perm::identity(set_.size()));
    } else {
      Word rest(w.begin() + 1, w.end());
      const Perm& prev = out[index.at(group_.eval_word(rest))].second;
      out.emplace_back(ww[i].first, perm_compose(gens_[w[0].first], prev));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<int> orbit_of(const GroupAction& action, int x) {
  std::vector<char> seen(action.size(), 0);
  std::vector<int> out{x};
  seen[x] = 1;
  for (std::size_t h = 0; h < out.size(); ++h)
    for (const auto& p : action.generator_perms()) {
      int y = p.images[out[h]];
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> orbits(const GroupAction& action) {
  std::vector<char> done(action.size(), 0);
  std::vector<std::vector<int>> out;
  for (int x = 0; x < action.size(); ++x) {
    if (done[x]) continue;
    auto o = orbit_of(action, x);
    for (int y : o) done[y] = 1;
    out.push_back(std::move(o));
  }
  return out;
}

bool is_transitive(const GroupAction& action) { return orbits(action).size() <= 1; }

std::vector<GroupElement> greedy_generators(const FiniteGroup& G, std::vector<GroupElement> elems) {
  std::sort(elems.begin(), elems.end());
  std::vector<GroupElement> gens;
  std::unordered_set<GroupElement, ElementHash> closure{G.identity()};
  for (const auto& e : elems) {
    if (closure.count(e)) continue;
    gens.push_back(e);
    // re-close
    std::vector<GroupElement> frontier(closure.begin(), closure.end());
    for (std::size_t h = 0; h < frontier.size(); ++h)
      for (const auto& s : gens) {
        GroupElement n = G.compose(s, frontier[h]);
        if (closure.insert(n).second) frontier.push_back(n);
      }
  }
  return gens;
}

FiniteGroup stabilizer(const GroupAction& action, int x) {
  if (x < 0 || x >= action.size()) throw Error(ErrorKind::NotInSet, "point out of range");
  std::vector<GroupElement> fix;
  for (const auto& [g, p] : action.element_perms())
    if (p.images[x] == x) fix.push_back(g);
  const FiniteGroup& G = action.group();
  return generated(G, greedy_generators(G, std::move(fix)),
                   "Stab(" + action.set().points[x] + ")");
}

bool operator==(const Coset& a, const Coset& b) {
  return a.subgroup.same_as(b.subgroup) && a.representative == b.representative;
}
bool operator!=(const Coset& a, const Coset& b) { return !(a == b); }

bool is_subgroup(const FiniteGroup& G, const FiniteGroup& K) {
  for (const auto& k : K.generators())
    if (!G.matches(k) || !G.contains(k)) return false;
  if (!G.matches(K.identity()) || K.identity() != G.identity()) return false;
  // K's elements must be closed under G's operation, not just K's own
  auto el = K.enumerate();
  std::unordered_set<GroupElement, ElementHash> in(el.begin(), el.end());
  const bool pairs = el.size() <= 2000;
  for (const auto& a : el)
    for (const auto& b : pairs ? el : K.generators())
      if (!in.count(G.compose(b, a))) return false;
  return true;
}

Coset make_coset(const FiniteGroup& G, const FiniteGroup& K, const GroupElement& a) {
  if (!is_subgroup(G, K)) throw Error(ErrorKind::NotASubgroup, K.name() + " not in " + G.name());
  GroupElement best;
  bool first = true;
  for (const auto& k : K.enumerate()) {
    GroupElement ak = G.compose(a, k);
    if (first || ak < best) {
      best = ak;
      first = false;
    }
  }
  return Coset{K, best};
}

std::vector<GroupElement> coset_elements(const FiniteGroup& G, const Coset& c) {
  std::vector<GroupElement> out;
  for (const auto& k : c.subgroup.enumerate()) out.push_back(G.compose(c.representative, k));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Coset> cosets(const FiniteGroup& G, const FiniteGroup& K) {
  if (!is_subgroup(G, K)) throw Error(ErrorKind::NotASubgroup, K.name() + " not in " + G.name());
  auto kel = K.enumerate();
  std::unordered_set<GroupElement, ElementHash> covered;
  std::vector<Coset> out;
  for (const auto& g : G.enumerate()) {  // sorted, so g is the minimum of its coset
    if (covered.count(g)) continue;
    for (const auto& k : kel) covered.insert(G.compose(g, k));
    out.push_back(Coset{K, g});
  }
  return out;
}

Coset translate(const FiniteGroup& G, const GroupElement& g, const Coset& c) {
  return make_coset(G, c.subgroup, G.compose(g, c.representative));
}

const Coset& OrbitCosetBijection::coset_of(int x) const {
  auto it = std::lower_bound(points.begin(), points.end(), x);
  if (it == points.end() || *it != x) throw Error(ErrorKind::NotInSet, "point not in orbit");
  return cosets[it - points.begin()];
}

int OrbitCosetBijection::point_of(const Coset& c) const {
  for (std::size_t i = 0; i < cosets.size(); ++i)
    if (cosets[i] == c) return points[i];
  throw Error(ErrorKind::NotInSet, "coset not in bijection");
}

OrbitCosetBijection orbit_coset_bijection(const GroupAction& action, int x0) {
  const FiniteGroup& G = action.group();
  OrbitCosetBijection b;
  b.x0 = x0;
  b.stabilizer = stabilizer(action, x0);
  // BFS transversal from x0
  std::vector<int> pts{x0};
  std::vector<GroupElement> wit{G.identity()};
  std::vector<int> pos(action.size(), -1);
  pos[x0] = 0;
  for (std::size_t h = 0; h < pts.size(); ++h)
    for (std::size_t s = 0; s < G.generators().size(); ++s) {
      int y = action.generator_perms()[s].images[pts[h]];
      if (pos[y] >= 0) continue;
      pos[y] = static_cast<int>(pts.size());
      pts.push_back(y);
      wit.push_back(G.compose(G.generators()[s], wit[h]));
    }
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return pts[a] < pts[c]; });
  for (std::size_t i : order) {
    b.points.push_back(pts[i]);
    b.witness.push_back(wit[i]);
    b.cosets.push_back(make_coset(G, b.stabilizer, wit[i]));
  }
  return b;
}

}  // namespace symsched
