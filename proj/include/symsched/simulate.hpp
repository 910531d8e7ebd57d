#pragma once

#include <array>
#include <string>
#include <vector>

#include "symsched/machines.hpp"
#include "symsched/matmul.hpp"

namespace symsched {

enum class ViolationKind {
  MissingOperand,
  DoubleBooking,
  MemoryExceeded,
  NonProcessorCompute,
  UncoveredInstruction,
  DuplicateInstruction,
  HomInconsistent,
};

const char* violation_label(ViolationKind k);

struct Violation {
  ViolationKind kind = ViolationKind::MissingOperand;
  int node = -1;
  std::vector<int> time;
  std::string detail;
};

struct CostReport {
  std::string machine;  // descriptor the bundle was replayed on
  ClassCost traffic;    // hop-units per link class, all transitions
  ClassCost main_traffic;  // transitions with both ends in the main phase
  std::array<ClassCost, 3> per_set;
  std::vector<ClassCost> per_transition;
  // hop-units sent by each node (charged to the source of every move)
  std::vector<long long> node_sent, node_sent_main;
  long long max_node_sent = 0, max_node_sent_main = 0;
  std::vector<int> peak_memory;
  int max_memory = 0;
  long long makespan = 0;
  long long coverage = 0;
  long long merges = 0, injections = 0, drains = 0;
  long long weighted_total = 0;
  std::vector<Violation> violations;

  long long total() const;       // unweighted hop-units
  long long main_total() const;
  bool clean() const { return violations.empty(); }
};

long long class_sum(const ClassCost& c);

// replay; violations are collected, never thrown. MachineMismatch if the bundle was built for another machine.
CostReport verify(const ScheduleBundle& bundle, const MachineModel& machine, const TimeModel& tm);
CostReport verify(const ScheduleBundle& bundle);

// per-variable moves between two placements of the same set (-1 = absent, ignored)
ClassCost traffic_delta(const std::vector<int>& before, const std::vector<int>& after, const MachineModel& machine);

// rho = rho_d ∘ rho_l on generators, plus the pointwise operand condition
std::vector<Violation> check_consistency(const ScheduleBundle& bundle);

struct CostComparison {
  int order = 0;  // -1: a is better, 1: b is better
  ClassCost class_delta;  // a - b
  long long total_delta = 0;
  long long makespan_delta = 0;
  long long violation_delta = 0;
  long long max_node_sent_delta = 0;
  long long max_node_sent_main_delta = 0;
};

// MachineMismatch unless both reports come from the same machine; with
// allow_reshape, machines with equal node counts (e.g. two tori of p nodes) compare too
CostComparison compare_cost(const CostReport& a, const CostReport& b, bool allow_reshape = false);

}  // namespace symsched
