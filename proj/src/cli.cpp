#include "symsched/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "symsched/equivariant.hpp"
#include "symsched/simulate.hpp"

namespace symsched {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParameterInfeasible:
    case ErrorKind::Divisibility:
    case ErrorKind::MemoryBudget:
    case ErrorKind::ConditionViolated:
    case ErrorKind::WindowOverflow:
    case ErrorKind::InvalidHierarchy:
      return kExitInfeasible;
    case ErrorKind::CapExceeded:
    case ErrorKind::OracleCapExceeded:
    case ErrorKind::SizeCap:
      return kExitCaps;
    default:
      return kExitError;
  }
}

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

// a bundle file, or a preset document that carries one
ScheduleBundle load_bundle(const std::string& path) {
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "no bundle given");
  json j = read_json_file(path);
  if (j.is_object() && j.contains("bundle")) return bundle_from_json(j.at("bundle"));
  return bundle_from_json(j);
}

void apply_machine_config(ScheduleBundle& b, const RunConfig& cfg) {
  if (!cfg.machine_path.empty()) {
    MachineSpec m = load_machine_config(cfg.machine_path);
    MachineSpec shape = m;
    shape.weights = b.machine.weights;
    shape.memory_words = b.machine.memory_words;
    if (!(shape == b.machine))
      throw Error(ErrorKind::MachineMismatch, "preset needs " + describe(b.machine) + ", config describes " + describe(m));
    b.machine = m;
  }
}

json violations_json(const std::vector<Violation>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back({{"kind", violation_label(v.kind)}, {"node", v.node}, {"time", v.time}, {"detail", v.detail}});
  return a;
}

json comparison_json(const CostComparison& c) {
  json cls = json::object();
  for (const auto& [k, v] : c.class_delta) cls[k] = v;
  return {{"order", c.order},
          {"class_delta", cls},
          {"weighted_total_delta", c.total_delta},
          {"makespan_delta", c.makespan_delta},
          {"violation_delta", c.violation_delta},
          {"max_node_sent_delta", c.max_node_sent_delta},
          {"max_node_sent_main_delta", c.max_node_sent_main_delta}};
}

// schedule table (instruction → point of P×T) to a bundle; operands sit where they are used
ScheduleBundle bundle_from_table(const std::string& preset, const MatmulInstance& inst, const MachineSpec& spec,
                                 int steps, const std::vector<int>& table, const Homomorphism& rho) {
  ScheduleBundle b;
  b.preset = preset;
  b.dims = inst;
  b.machine = spec;
  b.time = time_model({steps});
  b.placement_depth = 1;
  b.phases.assign(steps, "main");
  for (int i = 0; i < inst.l; ++i)
    for (int j = 0; j < inst.m; ++j)
      for (int k = 0; k < inst.n; ++k) {
        int pt = table[inst.instr_id(i, j, k)];
        b.slots.push_back(Slot{i, j, k, pt / steps, {pt % steps}});
      }
  for (int s = 0; s < 3; ++s) {
    auto& pl = b.placement[s];
    pl.copies = 1;
    pl.output = s == 2;
    std::vector<std::vector<int>> use(inst.set_size(s), std::vector<int>(steps, -1));
    for (const auto& sl : b.slots) {
      int& u = use[inst.var_id(s, sl.i, sl.j, sl.k)][sl.time[0]];
      if (u < 0) u = sl.node;
    }
    pl.steps.assign(steps, std::vector<int>(inst.set_size(s), 0));
    for (int v = 0; v < inst.set_size(s); ++v) {
      int first = 0;
      for (int t = 0; t < steps; ++t)
        if (use[v][t] >= 0) {
          first = use[v][t];
          break;
        }
      int cur = first;
      for (int t = 0; t < steps; ++t) {
        if (use[v][t] >= 0) cur = use[v][t];
        pl.steps[t][v] = cur;
      }
    }
    b.inp[s].assign(b.slots.size(), 0);
  }
  b.homs.push_back({"rho", rho});
  return b;
}

std::vector<long long> flat_encoding(const std::vector<GroupElement>& imgs) {
  std::vector<long long> out;
  for (const auto& g : imgs) {
    auto e = encode(g);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

}  // namespace

ScheduleBundle build_preset(const RunConfig& cfg) {
  ScheduleBundle b;
  const std::string& name = cfg.preset;
  if (name == "cannon") {
    b = cannon(cfg.q);
  } else if (name == "cannon-blocked") {
    int l = cfg.l ? cfg.l : cfg.q, m = cfg.m ? cfg.m : cfg.q, n = cfg.n ? cfg.n : cfg.q;
    b = cannon_blocked(l, m, n, cfg.q, cfg.memory);
  } else if (name == "2.5d") {
    b = schedule_2_5d(cfg.n, cfg.p, cfg.c);
  } else if (name == "fat-tree") {
    b = fat_tree_recursive(cfg.d);
  } else if (name == "pmh") {
    b = pmh_space_bounded(cfg.pmh_levels);
  } else if (name == "hex") {
    b = hex_systolic(cfg.q, cfg.window, cfg.anchor);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown preset " + name);
  }
  apply_machine_config(b, cfg);
  if (cfg.memory && name != "cannon-blocked") b.machine.memory_words = *cfg.memory;
  if (!cfg.stretch.empty()) b.time = flatten_time(b.time, cfg.stretch);
  return b;
}

CliResult cmd_preset(const RunConfig& cfg) {
  ScheduleBundle b = build_preset(cfg);
  CostReport r = verify(b);
  CliResult res;
  res.output = {{"format", kFormatVersion}, {"bundle", bundle_to_json(b)}, {"report", report_to_json(r)}};
  res.exit_code = r.clean() ? kExitClean : kExitViolations;
  return res;
}

std::vector<SearchCandidate> search_schedules(const RunConfig& cfg, bool* truncated) {
  if (truncated) *truncated = false;
  std::vector<SearchCandidate> out;
  auto push = [&](SearchCandidate c) {
    if (out.size() >= cfg.candidate_cap) {
      if (truncated) *truncated = true;
      return false;
    }
    out.push_back(std::move(c));
    return true;
  };

  if (cfg.family == "torus") {
    const int q = cfg.q;
    if (q < 2) throw Error(ErrorKind::InvalidArgument, "torus search needs q >= 2");
    if (1LL * q * q * q > 4096) throw Error(ErrorKind::CapExceeded, "torus search limited to q^3 <= 4096");
    MatmulInstance inst = instance(q, q, q);
    FiniteGroup sh = shift(q);
    FiniteGroup G = product({sh, sh, sh}).with_cap(cfg.enumeration_cap);
    FiniteGroup NT = product({abelian({q, q}), cyclic(q)}).with_cap(cfg.enumeration_cap);
    ActionSet xs = ActionSet::range("X", q * q * q), pts = ActionSet::range("PxT", q * q * q);
    GroupAction src = GroupAction::from_rule(G, xs, [&](const GroupElement& g, int x) {
      int i = x / (q * q), j = (x / q) % q, k = x % q;
      const auto& p = g.product().parts;
      return (p[0].perm().images[i] * q + p[1].perm().images[j]) * q + p[2].perm().images[k];
    });
    // point = node * q + t with node = x * q + y
    GroupAction tgt = GroupAction::from_rule(NT, pts, [&](const GroupElement& g, int pt) {
      int node = pt / q, t = pt % q;
      const auto& r = g.product().parts[0].modvec().r;
      long long dt = g.product().parts[1].modvec().r[0];
      int x = static_cast<int>((node / q + r[0]) % q), y = static_cast<int>((node % q + r[1]) % q);
      return (x * q + y) * q + static_cast<int>((t + dt) % q);
    });
    // component homs Shift(q) → Z/q: trivial plus the nontrivial ones
    std::vector<long long> vals{0};
    if (is_prime(q)) {
      for (const auto& h : enumerate_homs_to_cyclic(sh, q, q)) vals.push_back(h.value);
    } else {
      for (long long v = 1; v < q; ++v)
        if (!hom_failure(sh, cyclic(q), {modvec({v})})) vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());
    const int nv = static_cast<int>(vals.size());
    long long combos = 1;
    for (int e = 0; e < 9; ++e) combos *= nv;
    MachineSpec spec;
    spec.kind = MachineKind::Torus;
    spec.dims = {q, q};
    spec.memory_words = cfg.memory.value_or(3);
    for (long long code = 0; code < combos; ++code) {
      std::array<std::array<int, 3>, 3> rows{};
      long long c = code;
      for (int e = 8; e >= 0; --e) {
        rows[e / 3][e % 3] = static_cast<int>(vals[c % nv]);
        c /= nv;
      }
      TorusHomParams probe;
      probe.rows = rows;
      long long det = 1LL * rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1]) -
                      1LL * rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0]) +
                      1LL * rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
      if (std::gcd(((det % q) + q) % q, static_cast<long long>(q)) != 1) continue;  // f would not embed
      std::vector<GroupElement> imgs;
      for (int r = 0; r < 3; ++r) imgs.push_back(tuple({modvec({rows[r][0], rows[r][1]}), modvec({rows[r][2]})}));
      Homomorphism rho = make_hom_unchecked(G, NT, imgs);
      bool trunc = false;
      auto maps = solve_equivariant(src, tgt, rho, cfg.solution_cap, &trunc);
      const EquivariantMap* pick = nullptr;
      for (const auto& f : maps)
        if (f.table()[0] == 0) pick = &f;
      if (!pick) {
        if (trunc) throw Error(ErrorKind::CapExceeded, "solution cap hides the anchored map");
        continue;
      }
      SearchCandidate cand;
      cand.rho = imgs;
      cand.bundle = bundle_from_table("search-torus", inst, spec, q, pick->table(), rho);
      cand.report = verify(cand.bundle);
      if (!push(std::move(cand))) break;
    }
  } else if (cfg.family == "fat-tree") {
    if (cfg.d != 1) throw Error(ErrorKind::CapExceeded, "fat-tree search is limited to d = 1 (8 instructions)");
    MatmulInstance inst = instance(2, 2, 2);
    FiniteGroup S2 = symmetric(2);
    FiniteGroup G = product({S2, S2, S2}).with_cap(cfg.enumeration_cap);
    FiniteGroup N = iterated_wreath(2, 2);
    FiniteGroup NT = product({N, cyclic(2)}).with_cap(cfg.enumeration_cap);
    GroupAction src = GroupAction::from_rule(G, ActionSet::range("X", 8), [&](const GroupElement& g, int x) {
      int y = x;
      for (int r = 0; r < 3; ++r)
        if (g.product().parts[r].perm().images[0] == 1) y ^= 1 << (2 - r);
      return y;
    });
    GroupAction tgt = GroupAction::from_rule(NT, ActionSet::range("PxT", 8), [&](const GroupElement& g, int pt) {
      int node = N.act(g.product().parts[0], pt / 2);
      return node * 2 + static_cast<int>((pt % 2 + g.product().parts[1].modvec().r[0]) % 2);
    });
    auto elems = NT.enumerate();
    MachineSpec spec;
    spec.kind = MachineKind::FatTree;
    spec.levels = 2;
    spec.memory_words = cfg.memory.value_or(3);
    bool stop = false;
    for (std::size_t a = 0; a < elems.size() && !stop; ++a)
      for (std::size_t bq = 0; bq < elems.size() && !stop; ++bq)
        for (std::size_t cq = 0; cq < elems.size() && !stop; ++cq) {
          std::vector<GroupElement> imgs{elems[a], elems[bq], elems[cq]};
          if (hom_failure(G, NT, imgs)) continue;
          Homomorphism rho = make_hom(G, NT, imgs);
          auto maps = solve_equivariant(src, tgt, rho, cfg.solution_cap);
          const EquivariantMap* pick = nullptr;
          for (const auto& f : maps)
            if (f.table()[0] == 0) pick = &f;
          if (!pick) continue;
          std::vector<int> seen(8, 0);
          bool injective = true;
          for (int y : pick->table()) injective = injective && !seen[y]++;
          if (!injective) continue;  // two instructions on one slot
          SearchCandidate cand;
          cand.rho = imgs;
          cand.bundle = bundle_from_table("search-fat-tree", inst, spec, 2, pick->table(), rho);
          cand.report = verify(cand.bundle);
          stop = !push(std::move(cand));
        }
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown search family " + cfg.family);
  }

  std::vector<std::pair<std::vector<long long>, std::size_t>> keys;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& r = out[i].report;
    std::vector<long long> k{static_cast<long long>(r.violations.size()), r.weighted_total, r.makespan};
    auto e = flat_encoding(out[i].rho);
    k.insert(k.end(), e.begin(), e.end());
    keys.emplace_back(std::move(k), i);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<SearchCandidate> ranked;
  ranked.reserve(out.size());
  for (auto& [k, i] : keys) ranked.push_back(std::move(out[i]));
  return ranked;
}

CliResult cmd_search(const RunConfig& cfg) {
  bool truncated = false;
  auto cands = search_schedules(cfg, &truncated);
  json tiers = json::array();
  json ranked = json::array();
  int tier = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& r = cands[i].report;
    bool fresh = i == 0 || r.violations.size() != cands[i - 1].report.violations.size() ||
                 r.weighted_total != cands[i - 1].report.weighted_total || r.makespan != cands[i - 1].report.makespan;
    if (fresh) {
      ++tier;
      json tr = json::object();
      for (const auto& [k, v] : r.traffic) tr[k] = v;
      tiers.push_back({{"tier", tier}, {"violations", r.violations.size()}, {"weighted_total", r.weighted_total},
                       {"makespan", r.makespan}, {"traffic", tr}, {"count", 0}});
    }
    tiers.back()["count"] = tiers.back()["count"].get<int>() + 1;
    if (static_cast<int>(i) < cfg.top) {
      json imgs = json::array();
      for (const auto& g : cands[i].rho) imgs.push_back(element_to_json(g));
      ranked.push_back({{"rank", i + 1}, {"tier", tier}, {"rho", imgs}, {"report", report_to_json(r)}});
    }
  }
  CliResult res;
  res.output = {{"format", kFormatVersion},
                {"family", cfg.family},
                {"candidates", cands.size()},
                {"truncated", truncated},
                {"tiers", tiers},
                {"ranked", ranked}};
  res.exit_code = truncated ? kExitCaps : kExitClean;
  return res;
}

CliResult cmd_verify(const RunConfig& cfg) {
  ScheduleBundle b = load_bundle(cfg.bundle_path);
  MachineModel machine = build_machine(cfg.machine_path.empty() ? b.machine : load_machine_config(cfg.machine_path));
  TimeModel tm = cfg.stretch.empty() ? b.time : flatten_time(b.time, cfg.stretch);
  CostReport r = verify(b, machine, tm);
  CliResult res;
  res.output = report_to_json(r);
  res.exit_code = r.clean() ? kExitClean : kExitViolations;
  return res;
}

CliResult cmd_report(const RunConfig& cfg) {
  ScheduleBundle b = load_bundle(cfg.bundle_path);
  apply_machine_config(b, cfg);
  CostReport r = verify(b);
  auto cons = check_consistency(b);
  CliResult res;
  res.output = {{"format", kFormatVersion},
                {"preset", b.preset},
                {"machine", describe(b.machine)},
                {"report", report_to_json(r)},
                {"consistency", violations_json(cons)}};
  if (!cfg.compare_path.empty()) {
    ScheduleBundle other = load_bundle(cfg.compare_path);
    res.output["comparison"] = comparison_json(compare_cost(r, verify(other)));
  }
  res.exit_code = r.clean() && cons.empty() ? kExitClean : kExitViolations;
  return res;
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(part);
  return out;
}

long long to_int(const std::string& s) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "not an integer: " + s);
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"symmetry-derived matrix multiplication schedules"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string levels, anchor, stretch;
  std::size_t solution_cap = kDefaultSolutionCap, enum_cap = kDefaultEnumerationCap, cand_cap = 100000;
  int memory = -1;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--machine", cfg.machine_path, "machine config file");
    sc->add_option("--out", cfg.out_path, "write JSON here instead of stdout");
    sc->add_option("--stretch", stretch, "per-level clock weights, comma separated");
  };

  auto* preset = app.add_subcommand("preset", "build a preset schedule and replay it");
  preset->add_option("name", cfg.preset, "cannon | cannon-blocked | 2.5d | fat-tree | pmh | hex")->required();
  preset->add_option("--q", cfg.q, "torus / hex side");
  preset->add_option("--d", cfg.d, "fat-tree recursion depth");
  preset->add_option("--l", cfg.l);
  preset->add_option("--m", cfg.m);
  preset->add_option("--n", cfg.n);
  preset->add_option("--p", cfg.p, "processors (2.5d)");
  preset->add_option("--c", cfg.c, "replication (2.5d)");
  preset->add_option("--levels", levels, "pmh levels M:f,M:f lowest first");
  preset->add_option("--window", cfg.window, "hex window side");
  preset->add_option("--anchor", anchor, "hex anchor u,v");
  preset->add_option("--memory", memory, "words per node");
  common(preset);

  auto* search = app.add_subcommand("search", "enumerate homomorphisms, solve and rank schedules");
  search->add_option("--family", cfg.family, "torus | fat-tree")->required();
  search->add_option("--q", cfg.q);
  search->add_option("--d", cfg.d);
  search->add_option("--memory", memory);
  search->add_option("--solution-cap", solution_cap);
  search->add_option("--enum-cap", enum_cap);
  search->add_option("--max-candidates", cand_cap);
  search->add_option("--top", cfg.top, "ranked entries to print");
  common(search);

  auto* verify_cmd = app.add_subcommand("verify", "replay a bundle file");
  verify_cmd->add_option("bundle", cfg.bundle_path)->required();
  common(verify_cmd);

  auto* report = app.add_subcommand("report", "replay, check consistency, optionally compare");
  report->add_option("bundle", cfg.bundle_path)->required();
  report->add_option("--compare", cfg.compare_path, "second bundle to rank against");
  common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? kExitClean : kExitError;
  }

  try {
    if (solution_cap == 0 || enum_cap == 0 || cand_cap == 0) throw Error(ErrorKind::InvalidArgument, "caps must be positive");
    cfg.solution_cap = solution_cap;
    cfg.enumeration_cap = enum_cap;
    cfg.candidate_cap = cand_cap;
    if (memory >= 0) cfg.memory = memory;
    for (const auto& s : split_list(stretch)) cfg.stretch.push_back(to_int(s));
    for (const auto& lv : split_list(levels)) {
      auto c = lv.find(':');
      if (c == std::string::npos) throw Error(ErrorKind::ParseError, "pmh level needs M:f, got " + lv);
      cfg.pmh_levels.push_back({to_int(lv.substr(0, c)), to_int(lv.substr(c + 1))});
    }
    if (!anchor.empty()) {
      auto a = split_list(anchor);
      if (a.size() != 2) throw Error(ErrorKind::ParseError, "anchor needs u,v");
      cfg.anchor = std::array<int, 2>{static_cast<int>(to_int(a[0])), static_cast<int>(to_int(a[1]))};
    }

    CliResult res;
    if (preset->parsed()) res = cmd_preset(cfg);
    else if (search->parsed()) res = cmd_search(cfg);
    else if (verify_cmd->parsed()) res = cmd_verify(cfg);
    else res = cmd_report(cfg);

    std::string text = res.output.dump(2) + "\n";
    if (cfg.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out_path);
      if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + cfg.out_path);
      f << text;
    }
    return res.exit_code;
  } catch (const Error& e) {
    err << e.what() << "\n";
    out << json{{"format", kFormatVersion}, {"error", kind_name(e.kind())}, {"message", e.what()}}.dump(2) << "\n";
    return exit_code_for(e.kind());
  }
}

}  // namespace symsched
