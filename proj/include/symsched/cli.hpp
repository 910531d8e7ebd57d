#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symsched/equivariant.hpp"
#include "symsched/error.hpp"
#include "symsched/serialize.hpp"

namespace symsched {

enum ExitCode { kExitClean = 0, kExitError = 1, kExitViolations = 2, kExitInfeasible = 3, kExitCaps = 4 };

int exit_code_for(ErrorKind k);

struct RunConfig {
  std::string command;
  std::string preset;
  std::string machine_path;  // optional machine config file
  std::string bundle_path;   // verify / report input
  std::string compare_path;  // report: second bundle to rank against
  std::string out_path;      // empty: stdout
  std::string family;        // search: torus | fat-tree

  // instance and preset parameters
  int q = 3, d = 1, l = 0, m = 0, n = 0, p = 0, c = 1, window = 0;
  std::optional<std::array<int, 2>> anchor;
  std::vector<PmhLevel> pmh_levels;
  std::optional<int> memory;  // words per node
  std::vector<long long> stretch;

  // caps
  std::size_t solution_cap = kDefaultSolutionCap;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t candidate_cap = 100000;
  int top = 10;
};

struct CliResult {
  int exit_code = kExitClean;
  json output;
};

ScheduleBundle build_preset(const RunConfig& cfg);

struct SearchCandidate {
  std::vector<GroupElement> rho;  // images of the instruction-group generators
  ScheduleBundle bundle;          // anchored at f(X_000) = (node 0, time 0)
  CostReport report;
};

// every homomorphism of the family, solved and replayed, best first
std::vector<SearchCandidate> search_schedules(const RunConfig& cfg, bool* truncated);
CliResult cmd_preset(const RunConfig& cfg);
CliResult cmd_search(const RunConfig& cfg);
CliResult cmd_verify(const RunConfig& cfg);
CliResult cmd_report(const RunConfig& cfg);

// full command line; JSON goes to `out` (or --out), diagnostics to `err`
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symsched
