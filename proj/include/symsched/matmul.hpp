#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "symsched/groups.hpp"
#include "symsched/machines.hpp"

namespace symsched {

enum class VarSet { A = 0, B = 1, C = 2 };
const char* set_name(int s);

// X = {(i,j,k)}; instruction (i,j,k) reads A_ij, B_jk and updates C_ki
struct MatmulInstance {
  int l = 1, m = 1, n = 1;

  long long instruction_count() const { return 1LL * l * m * n; }
  int instr_id(int i, int j, int k) const { return (i * m + j) * n + k; }
  int set_size(int s) const;
  int var_id(int s, int i, int j, int k) const;  // operand of (i,j,k) in set s
  std::array<int, 2> var_indices(int s, int v) const;  // A: (i,j)  B: (j,k)  C: (k,i)
  std::string var_name(int s, int v) const;
  FiniteGroup symmetry_group() const;  // S_l × S_m × S_n

  bool operator==(const MatmulInstance&) const = default;
};

MatmulInstance instance(int l, int m, int n);

struct Slot {
  int i = 0, j = 0, k = 0;
  int node = 0;
  std::vector<int> time;
};

struct SetPlacement {
  int copies = 1;
  bool output = false;
  // steps[s][v * copies + c] = node, or -1 when that copy does not exist at step s
  std::vector<std::vector<int>> steps;
};

struct HomRecord {
  std::string name;  // "rho", "rho_l.A", "rho_d.A", ...
  Homomorphism hom;
};

struct ScheduleBundle {
  std::string preset;
  MatmulInstance dims;
  MachineSpec machine;
  TimeModel time;
  int placement_depth = 1;          // placements change only on this many leading levels
  std::vector<std::string> phases;  // per placement step: prologue / main / epilogue
  std::vector<Slot> slots;
  std::array<SetPlacement, 3> placement;
  std::array<std::vector<int>, 3> inp;  // copy read by slot s, per set
  std::vector<HomRecord> homs;

  int placement_steps() const;
  int step_of(const std::vector<int>& time) const;  // -1 if malformed
  const HomRecord* find_hom(const std::string& name) const;
};

struct TorusSetMu {
  std::array<int, 2> mu1{}, mu2{}, mut{};  // first index, second index, time
};

// rows[r] = (x, y, t) images of the shift in index r (i, j, k)
struct TorusHomParams {
  int x0 = 0, y0 = 0, t0 = 0;
  std::array<std::array<int, 3>, 3> rows{};
  std::array<TorusSetMu, 3> mu{};  // A uses (i,j), B (j,k), C (k,i)
};

// index roles per set: first, second, missing
std::array<int, 3> set_index_roles(int s);

// nullopt when the commuting identity and the embedding condition hold
std::optional<std::string> torus_params_failure(int q, const TorusHomParams& p);
TorusHomParams cannon_params();

struct CyclicHom {
  GroupElement sigma;  // primitive generator
  long long value = 0; // image of sigma in Z/t
  Homomorphism hom;
};

// nontrivial homs G → Z/t with a primitive (full q-cycle) outside the kernel
std::vector<CyclicHom> enumerate_homs_to_cyclic(const FiniteGroup& G, int q, int t);
bool is_prime(long long q);
bool is_primitive(const Perm& p);  // one cycle through all points

ScheduleBundle torus_schedule(int q, const TorusHomParams& params, bool checked = true);
ScheduleBundle cannon(int q);
ScheduleBundle cannon_blocked(int l, int m, int n, int q, std::optional<int> memory_budget = std::nullopt);
ScheduleBundle schedule_2_5d(int n, int p, int c);
ScheduleBundle fat_tree_recursive(int d);
ScheduleBundle pmh_space_bounded(const std::vector<PmhLevel>& levels);
// window 0 picks 3q; anchor defaults to the window centre
ScheduleBundle hex_systolic(int q, int window = 0, std::optional<std::array<int, 2>> anchor = std::nullopt);

// a second generator table for S2^3 → iterwr(2,2) × Z/2; a valid hom whose map differs from the preset
Homomorphism fat_tree_alt_table();

}  // namespace symsched
