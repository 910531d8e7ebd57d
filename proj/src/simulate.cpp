#include "symsched/simulate.hpp"

#include <map>
#include <set>

#include "symsched/error.hpp"

namespace symsched {

namespace {

long long weighted(const ClassCost& c, const MachineModel& m) {
  long long w = 0;
  for (const auto& [k, v] : c) w += m.weight(k) * v;
  return w;
}

void add_into(ClassCost& acc, const ClassCost& c) {
  for (const auto& [k, v] : c) acc[k] += v;
}

// operand condition for every slot; shared by verify and check_consistency
void operand_check(const ScheduleBundle& b, std::vector<Violation>& out) {
  for (std::size_t x = 0; x < b.slots.size(); ++x) {
    const Slot& sl = b.slots[x];
    int st = b.step_of(sl.time);
    if (st < 0 || sl.i < 0 || sl.j < 0 || sl.k < 0 || sl.i >= b.dims.l || sl.j >= b.dims.m || sl.k >= b.dims.n)
      continue;  // reported as uncovered by verify
    for (int s = 0; s < 3; ++s) {
      const auto& pl = b.placement[s];
      int v = b.dims.var_id(s, sl.i, sl.j, sl.k);
      int c = x < b.inp[s].size() ? b.inp[s][x] : -1;
      int at = -1;
      if (c >= 0 && c < pl.copies && st < static_cast<int>(pl.steps.size()))
        at = pl.steps[st].at(static_cast<std::size_t>(v) * pl.copies + c);
      if (at != sl.node)
        out.push_back({ViolationKind::MissingOperand, sl.node, sl.time,
                       b.dims.var_name(s, v) + " copy " + std::to_string(c) + " is at node " + std::to_string(at) +
                           " for instruction (" + std::to_string(sl.i) + "," + std::to_string(sl.j) + "," +
                           std::to_string(sl.k) + ")"});
    }
  }
}

}  // namespace

const char* violation_label(ViolationKind k) {
  switch (k) {
    case ViolationKind::MissingOperand: return "MissingOperand";
    case ViolationKind::DoubleBooking: return "DoubleBooking";
    case ViolationKind::MemoryExceeded: return "MemoryExceeded";
    case ViolationKind::NonProcessorCompute: return "NonProcessorCompute";
    case ViolationKind::UncoveredInstruction: return "UncoveredInstruction";
    case ViolationKind::DuplicateInstruction: return "DuplicateInstruction";
    case ViolationKind::HomInconsistent: return "HomInconsistent";
  }
  return "?";
}

long long class_sum(const ClassCost& c) {
  long long t = 0;
  for (const auto& kv : c) t += kv.second;
  return t;
}

long long CostReport::total() const { return class_sum(traffic); }
long long CostReport::main_total() const { return class_sum(main_traffic); }

ClassCost traffic_delta(const std::vector<int>& before, const std::vector<int>& after, const MachineModel& machine) {
  if (before.size() != after.size()) throw Error(ErrorKind::InvalidArgument, "placements cover different variables");
  ClassCost out;
  for (std::size_t v = 0; v < before.size(); ++v)
    if (before[v] >= 0 && after[v] >= 0 && before[v] != after[v]) add_into(out, machine.move_cost(before[v], after[v]));
  return out;
}

CostReport verify(const ScheduleBundle& b, const MachineModel& machine, const TimeModel& tm) {
  // weights and the memory budget come from the machine being replayed on
  MachineSpec shape = machine.spec();
  shape.weights = b.machine.weights;
  shape.memory_words = b.machine.memory_words;
  if (!(shape == b.machine))
    throw Error(ErrorKind::MachineMismatch,
                "bundle targets " + describe(b.machine) + ", got " + describe(machine.spec()));
  if (tm.levels != b.time.levels)
    throw Error(ErrorKind::StructureMismatch, "time model levels differ from the bundle");
  CostReport r;
  r.machine = describe(machine.spec());
  const int nodes = machine.node_count();
  const int steps = b.placement_steps();
  r.node_sent.assign(nodes, 0);
  r.node_sent_main.assign(nodes, 0);
  r.peak_memory.assign(nodes, 0);

  // coverage and booking
  std::vector<int> seen(b.dims.instruction_count(), 0);
  std::map<std::pair<int, long long>, int> booked;  // (node, clock) -> slot
  for (std::size_t x = 0; x < b.slots.size(); ++x) {
    const Slot& sl = b.slots[x];
    bool idx_ok = sl.i >= 0 && sl.j >= 0 && sl.k >= 0 && sl.i < b.dims.l && sl.j < b.dims.m && sl.k < b.dims.n;
    bool where_ok = sl.node >= 0 && sl.node < nodes && b.step_of(sl.time) >= 0;
    if (!idx_ok || !where_ok) {
      r.violations.push_back({ViolationKind::UncoveredInstruction, sl.node, sl.time, "slot outside instance, machine or time range"});
      continue;
    }
    int id = b.dims.instr_id(sl.i, sl.j, sl.k);
    if (seen[id]++) {
      r.violations.push_back({ViolationKind::DuplicateInstruction, sl.node, sl.time,
                              "instruction " + std::to_string(id) + " scheduled twice"});
      continue;
    }
    long long clk = tm.clock(sl.time);
    r.makespan = std::max(r.makespan, clk + 1);
    if (!machine.is_processor(sl.node))
      r.violations.push_back({ViolationKind::NonProcessorCompute, sl.node, sl.time, "node " + machine.node_label(sl.node) + " has no processor"});
    auto [it, fresh] = booked.emplace(std::make_pair(sl.node, clk), static_cast<int>(x));
    if (!fresh)
      r.violations.push_back({ViolationKind::DoubleBooking, sl.node, sl.time,
                              "node " + machine.node_label(sl.node) + " at clock " + std::to_string(clk) +
                                  " also runs slot " + std::to_string(it->second)});
  }
  for (std::size_t id = 0; id < seen.size(); ++id)
    if (seen[id]) ++r.coverage;
    else r.violations.push_back({ViolationKind::UncoveredInstruction, -1, {}, "instruction " + std::to_string(id) + " never scheduled"});

  operand_check(b, r.violations);

  // memory
  for (int g = 0; g < steps; ++g) {
    std::vector<int> words(nodes, 0);
    for (const auto& pl : b.placement)
      if (g < static_cast<int>(pl.steps.size()))
        for (int n : pl.steps[g])
          if (n >= 0 && n < nodes) ++words[n];
    for (int n = 0; n < nodes; ++n) {
      r.peak_memory[n] = std::max(r.peak_memory[n], words[n]);
      if (words[n] > machine.memory_words())
        r.violations.push_back({ViolationKind::MemoryExceeded, n, {g},
                                std::to_string(words[n]) + " words at step " + std::to_string(g) + ", budget " +
                                    std::to_string(machine.memory_words())});
    }
  }
  for (int n = 0; n < nodes; ++n) r.max_memory = std::max(r.max_memory, r.peak_memory[n]);

  // traffic per transition
  r.per_transition.assign(steps > 0 ? steps - 1 : 0, {});
  for (int g = 0; g + 1 < steps; ++g) {
    bool main = g + 1 < static_cast<int>(b.phases.size()) && b.phases[g] == "main" && b.phases[g + 1] == "main";
    auto charge = [&](int s, int from, int to) {
      ClassCost c = machine.move_cost(from, to);
      long long h = class_sum(c);
      add_into(r.per_transition[g], c);
      add_into(r.per_set[s], c);
      add_into(r.traffic, c);
      r.node_sent[from] += h;
      if (main) {
        add_into(r.main_traffic, c);
        r.node_sent_main[from] += h;
      }
    };
    // cheapest present copy, as the source of a move to `fixed` or the destination of one from it
    auto cheapest = [&](const std::vector<int>& cand, int fixed, bool cand_is_source) {
      int best = -1;
      long long bw = 0;
      for (int n : cand) {
        if (n < 0) continue;
        long long w = weighted(cand_is_source ? machine.move_cost(n, fixed) : machine.move_cost(fixed, n), machine);
        if (best < 0 || w < bw) {
          best = n;
          bw = w;
        }
      }
      return best;
    };
    for (int s = 0; s < 3; ++s) {
      const auto& pl = b.placement[s];
      const auto& before = pl.steps[g];
      const auto& after = pl.steps[g + 1];
      const int cp = pl.copies;
      for (int v = 0; v < b.dims.set_size(s); ++v) {
        std::vector<int> pre(before.begin() + v * cp, before.begin() + (v + 1) * cp);
        std::vector<int> post(after.begin() + v * cp, after.begin() + (v + 1) * cp);
        for (int c = 0; c < cp; ++c) {
          int a = pre[c], z = post[c];
          if (a >= 0 && z >= 0) {
            if (a != z) charge(s, a, z);
          } else if (a < 0 && z >= 0) {
            int src = cheapest(pre, z, true);
            if (src >= 0) charge(s, src, z);
            else ++r.injections;
          } else if (a >= 0 && z < 0 && pl.output) {
            int dst = cheapest(post, a, false);
            if (dst >= 0) {
              ++r.merges;
              charge(s, a, dst);
            } else {
              ++r.drains;
            }
          }
        }
      }
    }
  }
  for (int n = 0; n < nodes; ++n) {
    r.max_node_sent = std::max(r.max_node_sent, r.node_sent[n]);
    r.max_node_sent_main = std::max(r.max_node_sent_main, r.node_sent_main[n]);
  }
  r.weighted_total = weighted(r.traffic, machine);
  return r;
}

CostReport verify(const ScheduleBundle& b) { return verify(b, build_machine(b.machine), b.time); }

std::vector<Violation> check_consistency(const ScheduleBundle& b) {
  std::vector<Violation> out;
  if (const HomRecord* rho = b.find_hom("rho")) {
    for (int s = 0; s < 3; ++s) {
      const HomRecord* lo = b.find_hom(std::string("rho_l.") + set_name(s));
      const HomRecord* dm = b.find_hom(std::string("rho_d.") + set_name(s));
      if (!lo || !dm) continue;
      const auto& gens = rho->hom.source().generators();
      for (std::size_t g = 0; g < gens.size(); ++g) {
        GroupElement want = rho->hom.apply(gens[g]);
        GroupElement got = dm->hom.apply(lo->hom.apply(gens[g]));
        if (want != got)
          out.push_back({ViolationKind::HomInconsistent, -1, {},
                         std::string("set ") + set_name(s) + ": generator " + std::to_string(g) + " gives " +
                             to_string(got) + ", rho gives " + to_string(want)});
      }
    }
  }
  operand_check(b, out);
  return out;
}

CostComparison compare_cost(const CostReport& a, const CostReport& b, bool allow_reshape) {
  bool same = a.machine == b.machine || (allow_reshape && a.node_sent.size() == b.node_sent.size());
  if (!same) throw Error(ErrorKind::MachineMismatch, a.machine + " vs " + b.machine);
  CostComparison c;
  std::set<std::string> keys;
  for (const auto& kv : a.traffic) keys.insert(kv.first);
  for (const auto& kv : b.traffic) keys.insert(kv.first);
  for (const auto& k : keys) {
    auto ia = a.traffic.find(k), ib = b.traffic.find(k);
    c.class_delta[k] = (ia == a.traffic.end() ? 0 : ia->second) - (ib == b.traffic.end() ? 0 : ib->second);
  }
  c.violation_delta = static_cast<long long>(a.violations.size()) - static_cast<long long>(b.violations.size());
  c.total_delta = a.weighted_total - b.weighted_total;
  c.makespan_delta = a.makespan - b.makespan;
  c.max_node_sent_delta = a.max_node_sent - b.max_node_sent;
  c.max_node_sent_main_delta = a.max_node_sent_main - b.max_node_sent_main;
  for (long long d : {c.violation_delta, c.total_delta, c.makespan_delta})
    if (d != 0) {
      c.order = d < 0 ? -1 : 1;
      break;
    }
  return c;
}

}  // namespace symsched
