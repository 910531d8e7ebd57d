#pragma once

#include <cstddef>
#include <vector>

#include "symsched/actions.hpp"
#include "symsched/groups.hpp"

namespace symsched {

struct CosetMapParam {
  GroupElement a;  // minimal representative of aK
  FiniteGroup L;   // source stabilizer
  FiniteGroup K;   // target stabilizer
  Homomorphism rho;
};

// a⁻¹ρ(L)a ⊆ K
bool coset_map_exists(const FiniteGroup& G, const FiniteGroup& H, const Homomorphism& rho,
                      const FiniteGroup& L, const FiniteGroup& K, const GroupElement& a);
// one parameter per admissible coset aK
std::vector<CosetMapParam> enumerate_coset_maps(const FiniteGroup& G, const FiniteGroup& H,
                                                const Homomorphism& rho, const FiniteGroup& L,
                                                const FiniteGroup& K);

struct OrbitChoice {
  int anchor = 0;        // minimal point of the source orbit
  int target_orbit = 0;  // κ(i)
  int image = 0;         // f(anchor)
  CosetMapParam param;
};

class EquivariantMap {
 public:
  EquivariantMap(GroupAction source, GroupAction target, Homomorphism rho,
                 std::vector<OrbitChoice> choices, std::vector<int> table)
      : source_(std::move(source)), target_(std::move(target)), rho_(std::move(rho)),
        choices_(std::move(choices)), table_(std::move(table)) {}

  const GroupAction& source() const { return source_; }
  const GroupAction& target() const { return target_; }
  const Homomorphism& rho() const { return rho_; }
  const std::vector<OrbitChoice>& choices() const { return choices_; }
  const std::vector<int>& table() const { return table_; }

  int eval(int x) const;
  // ρ(g)·f(anchor) for the orbit of x, requiring g·anchor = x
  int eval_via(const GroupElement& g, int x) const;

 private:
  GroupAction source_, target_;
  Homomorphism rho_;
  std::vector<OrbitChoice> choices_;
  std::vector<int> table_;
};

constexpr std::size_t kDefaultSolutionCap = 10000;
constexpr std::size_t kDefaultOracleCap = 100000000;

// all maps with f(g·x) = ρ(g)·f(x); stops after `limit` maps and sets *truncated
std::vector<EquivariantMap> solve_equivariant(const GroupAction& source, const GroupAction& target,
                                              const Homomorphism& rho,
                                              std::size_t limit = kDefaultSolutionCap,
                                              bool* truncated = nullptr);

int preimage_size(const EquivariantMap& f);

// exhaustive search over functions; the oracle for solve_equivariant
std::vector<std::vector<int>> brute_force_equivariant(const GroupAction& source,
                                                      const GroupAction& target,
                                                      const Homomorphism& rho,
                                                      std::size_t oracle_cap = kDefaultOracleCap);

}  // namespace symsched
