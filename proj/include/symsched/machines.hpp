#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symsched/actions.hpp"
#include "symsched/groups.hpp"

namespace symsched {

enum class MachineKind { Torus, FatTree, Pmh, Hex };

struct PmhLevel {
  long long M = 0;  // words in one cache of this level
  long long f = 1;  // fan-out used for computation
  bool operator==(const PmhLevel&) const = default;
};

struct MachineSpec {
  MachineKind kind = MachineKind::Torus;
  std::vector<int> dims;       // torus extents
  int levels = 0;              // fat tree depth k
  std::vector<PmhLevel> pmh;   // lowest cache first
  int window = 0;              // hex: lattice coords in [0,window)^2
  int memory_words = 3;
  std::map<std::string, long long> weights;  // per link class, default 1

  bool operator==(const MachineSpec&) const = default;
};

const char* kind_label(MachineKind k);
std::string describe(const MachineSpec& s);
MachineSpec parse_machine_config(const std::string& text);  // ParseError
MachineSpec load_machine_config(const std::string& path);

using ClassCost = std::map<std::string, long long>;

class MachineModel {
 public:
  explicit MachineModel(MachineSpec spec);

  const MachineSpec& spec() const { return spec_; }
  MachineKind kind() const { return spec_.kind; }
  int node_count() const { return nodes_; }
  std::string node_label(int node) const;
  bool is_processor(int node) const { return processor_.at(node) != 0; }
  int processor_count() const;
  int memory_words() const { return spec_.memory_words; }
  const std::vector<std::string>& link_classes() const { return classes_; }
  long long weight(const std::string& cls) const;

  const FiniteGroup& network_group() const { return network_; }
  bool has_node_action() const { return spec_.kind != MachineKind::Hex; }
  const GroupAction& node_action() const;

  // element acting on one node; hex raises WindowOverflow off the window
  int translate(const GroupElement& g, int node) const;
  // hop units of one word routed from one node to another
  ClassCost move_cost(int from, int to) const;
  // torus and hex: one word moved by g; tree and pmh: one word per node, all moved by g
  ClassCost link_cost(const GroupElement& g) const;

  // torus / hex coordinates
  std::vector<int> coords(int node) const;
  int node_at(const std::vector<int>& c) const;

  // pmh helpers
  int pmh_levels() const { return static_cast<int>(spec_.pmh.size()); }
  int pmh_cache_nodes(int level) const;  // nodes inside one level cache (level ≥ 1)
  int pmh_common_level(int a, int b) const;

 private:
  MachineSpec spec_;
  int nodes_ = 0;
  std::vector<char> processor_;
  std::vector<std::string> classes_;
  FiniteGroup network_;
  std::shared_ptr<GroupAction> action_;
};

MachineModel torus(std::vector<int> dims, int memory_words = 3);
MachineModel fat_tree(int k, int memory_words = 3);
MachineModel pmh(std::vector<PmhLevel> levels);
MachineModel hex_array(int window, int memory_words = 3);
MachineModel build_machine(const MachineSpec& spec);

// hex lattice helpers, (g2, g3) coordinates with g1 = g2 + g3
GroupElement hex_g1();
GroupElement hex_g2();
GroupElement hex_g3();

// Levels are listed most significant first.
struct TimeModel {
  std::vector<int> levels;
  std::vector<long long> stretch;  // clock weight per level

  FiniteGroup delta_group() const { return abelian({levels.begin(), levels.end()}); }
  long long clock(const std::vector<int>& v) const;
  long long total_steps() const;
};

// positional weights (product of the extents below each level)
TimeModel time_model(std::vector<int> levels);
TimeModel flatten_time(const TimeModel& tm, std::vector<long long> stretch);

}  // namespace symsched
