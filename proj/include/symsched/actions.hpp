#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symsched/groups.hpp"

namespace symsched {

struct ActionSet {
  std::string label;
  std::vector<std::string> points;

  int size() const { return static_cast<int>(points.size()); }
  int index_of(const std::string& p) const;  // throws NotInSet
  static ActionSet range(const std::string& label, int n);  // points "0".."n-1"
};

// Action given on generators only (one point permutation per generator),
// extended to arbitrary elements through words.
class GroupAction {
 public:
  GroupAction() = default;
  GroupAction(FiniteGroup group, ActionSet set, std::vector<Perm> generator_perms);

  // rule is only ever evaluated on generators
  static GroupAction from_rule(const FiniteGroup& group, const ActionSet& set,
                               const std::function<int(const GroupElement&, int)>& rule);
  // permutation group on [degree]
  static GroupAction natural(const FiniteGroup& group);
  // left multiplication on the sorted element list
  static GroupAction regular(const FiniteGroup& group);

  const FiniteGroup& group() const { return group_; }
  const ActionSet& set() const { return set_; }
  int size() const { return set_.size(); }
  const std::vector<Perm>& generator_perms() const { return gens_; }
  bool validated() const { return validated_; }

  Perm perm_of(const GroupElement& g) const;
  int act(const GroupElement& g, int x) const;
  // every element with its point permutation (sorted by element)
  std::vector<std::pair<GroupElement, Perm>> element_perms() const;

 private:
  FiniteGroup group_;
  ActionSet set_;
  std::vector<Perm> gens_;
  bool validated_ = false;
};

std::vector<std::vector<int>> orbits(const GroupAction& action);
std::vector<int> orbit_of(const GroupAction& action, int x);
bool is_transitive(const GroupAction& action);
FiniteGroup stabilizer(const GroupAction& action, int x);

// smallest generating subset of an explicit element list, in sorted order
std::vector<GroupElement> greedy_generators(const FiniteGroup& G, std::vector<GroupElement> elems);

struct Coset {
  FiniteGroup subgroup;
  GroupElement representative;  // minimal element of aK
};

bool operator==(const Coset& a, const Coset& b);
bool operator!=(const Coset& a, const Coset& b);

bool is_subgroup(const FiniteGroup& G, const FiniteGroup& K);
Coset make_coset(const FiniteGroup& G, const FiniteGroup& K, const GroupElement& a);
std::vector<GroupElement> coset_elements(const FiniteGroup& G, const Coset& c);
std::vector<Coset> cosets(const FiniteGroup& G, const FiniteGroup& K);
Coset translate(const FiniteGroup& G, const GroupElement& g, const Coset& c);

struct OrbitCosetBijection {
  int x0 = 0;
  FiniteGroup stabilizer;
  std::vector<int> points;           // orbit of x0, sorted
  std::vector<Coset> cosets;         // cosets[i] belongs to points[i]
  std::vector<GroupElement> witness; // witness[i]·x0 = points[i]

  const Coset& coset_of(int x) const;
  int point_of(const Coset& c) const;
};

OrbitCosetBijection orbit_coset_bijection(const GroupAction& action, int x0);

}  // namespace symsched
