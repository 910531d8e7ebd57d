#include "symsched/serialize.hpp"

#include "symsched/error.hpp"

namespace symsched {

namespace {

template <class F>
auto guarded(const char* what, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

[[noreturn]] void bad(const std::string& why) { throw Error(ErrorKind::ParseError, why); }

json cost_json(const ClassCost& c) {
  json o = json::object();
  for (const auto& [k, v] : c) o[k] = v;
  return o;
}

}  // namespace

json element_to_json(const GroupElement& g) {
  if (g.is_perm()) return {{"perm", g.perm().images}};
  if (g.is_modvec()) return {{"mod", g.modvec().r}};
  if (g.is_wreath()) {
    json base = json::array();
    for (const auto& b : g.wreath().base) base.push_back(element_to_json(b));
    return {{"base", base}, {"top", g.wreath().top.images}};
  }
  json parts = json::array();
  for (const auto& p : g.product().parts) parts.push_back(element_to_json(p));
  return {{"tuple", parts}};
}

GroupElement element_from_json(const json& j) {
  return guarded("element", [&]() -> GroupElement {
    if (!j.is_object()) bad("element must be an object");
    if (j.contains("perm")) return Perm{j.at("perm").get<std::vector<int>>()};
    if (j.contains("mod")) return modvec(j.at("mod").get<std::vector<long long>>());
    if (j.contains("base")) {
      WreathTuple w;
      for (const auto& b : j.at("base")) w.base.push_back(element_from_json(b));
      w.top.images = j.at("top").get<std::vector<int>>();
      return w;
    }
    if (j.contains("tuple")) {
      std::vector<GroupElement> parts;
      for (const auto& p : j.at("tuple")) parts.push_back(element_from_json(p));
      return tuple(std::move(parts));
    }
    bad("unknown element encoding");
  });
}

json group_to_json(const FiniteGroup& G) {
  switch (G.kind()) {
    case GroupKind::Abelian: return {{"kind", "abelian"}, {"moduli", G.moduli()}};
    case GroupKind::Symmetric: return {{"kind", "symmetric"}, {"n", G.n()}};
    case GroupKind::Shift: return {{"kind", "shift"}, {"q", G.n()}};
    case GroupKind::Product: {
      json f = json::array();
      for (const auto& x : G.factors()) f.push_back(group_to_json(x));
      return {{"kind", "product"}, {"factors", f}};
    }
    case GroupKind::Wreath:
      return {{"kind", "wreath"},
              {"base", group_to_json(G.factors()[0])},
              {"blocks", G.blocks()},
              {"top", group_to_json(G.factors()[1])}};
    case GroupKind::Generated: {
      json gens = json::array();
      for (const auto& g : G.generators()) gens.push_back(element_to_json(g));
      return {{"kind", "generated"}, {"parent", group_to_json(G.parent())}, {"gens", gens}, {"name", G.name()}};
    }
  }
  bad("unknown group kind");
}

FiniteGroup group_from_json(const json& j) {
  return guarded("group", [&]() -> FiniteGroup {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "abelian") return abelian(j.at("moduli").get<std::vector<long long>>());
    if (kind == "symmetric") return symmetric(j.at("n").get<int>());
    if (kind == "shift") return shift(j.at("q").get<int>());
    if (kind == "product") {
      std::vector<FiniteGroup> f;
      for (const auto& x : j.at("factors")) f.push_back(group_from_json(x));
      return product(std::move(f));
    }
    if (kind == "wreath")
      return wreath(group_from_json(j.at("base")), j.at("blocks").get<int>(), group_from_json(j.at("top")));
    if (kind == "generated") {
      std::vector<GroupElement> gens;
      for (const auto& g : j.at("gens")) gens.push_back(element_from_json(g));
      return generated(group_from_json(j.at("parent")), std::move(gens), j.value("name", ""));
    }
    bad("unknown group kind " + kind);
  });
}

json hom_to_json(const Homomorphism& h) {
  json imgs = json::array();
  for (const auto& g : h.images()) imgs.push_back(element_to_json(g));
  return {{"source", group_to_json(h.source())},
          {"target", group_to_json(h.target())},
          {"images", imgs},
          {"validated", h.validated()}};
}

Homomorphism hom_from_json(const json& j) {
  return guarded("homomorphism", [&]() -> Homomorphism {
    FiniteGroup src = group_from_json(j.at("source"));
    FiniteGroup tgt = group_from_json(j.at("target"));
    std::vector<GroupElement> imgs;
    for (const auto& g : j.at("images")) imgs.push_back(element_from_json(g));
    if (j.value("validated", false)) return make_hom(src, tgt, std::move(imgs));
    return make_hom_unchecked(src, tgt, std::move(imgs));
  });
}

json machine_to_json(const MachineSpec& s) {
  json o = {{"kind", kind_label(s.kind)}, {"memory_words", s.memory_words}};
  switch (s.kind) {
    case MachineKind::Torus: o["dims"] = s.dims; break;
    case MachineKind::FatTree: o["levels"] = s.levels; break;
    case MachineKind::Pmh: {
      json lv = json::array();
      for (const auto& l : s.pmh) lv.push_back({{"M", l.M}, {"f", l.f}});
      o["levels"] = lv;
      break;
    }
    case MachineKind::Hex: o["window"] = s.window; break;
  }
  o["weights"] = cost_json(s.weights);
  return o;
}

MachineSpec machine_from_json(const json& j) {
  return guarded("machine", [&]() -> MachineSpec {
    MachineSpec s;
    const std::string kind = j.at("kind").get<std::string>();
    s.memory_words = j.at("memory_words").get<int>();
    if (kind == "torus") {
      s.kind = MachineKind::Torus;
      s.dims = j.at("dims").get<std::vector<int>>();
    } else if (kind == "fat_tree") {
      s.kind = MachineKind::FatTree;
      s.levels = j.at("levels").get<int>();
    } else if (kind == "pmh") {
      s.kind = MachineKind::Pmh;
      for (const auto& l : j.at("levels")) s.pmh.push_back({l.at("M").get<long long>(), l.at("f").get<long long>()});
    } else if (kind == "hex") {
      s.kind = MachineKind::Hex;
      s.window = j.at("window").get<int>();
    } else {
      bad("unknown machine kind " + kind);
    }
    if (j.contains("weights"))
      for (const auto& [k, v] : j.at("weights").items()) s.weights[k] = v.get<long long>();
    return s;
  });
}

json time_to_json(const TimeModel& tm) { return {{"levels", tm.levels}, {"stretch", tm.stretch}}; }

TimeModel time_from_json(const json& j) {
  return guarded("time", [&]() -> TimeModel {
    TimeModel tm = time_model(j.at("levels").get<std::vector<int>>());
    if (j.contains("stretch")) tm = flatten_time(tm, j.at("stretch").get<std::vector<long long>>());
    return tm;
  });
}

json bundle_to_json(const ScheduleBundle& b) {
  json slots = json::array();
  for (const auto& s : b.slots) slots.push_back({s.i, s.j, s.k, s.node, s.time});
  json sets = json::array();
  for (int s = 0; s < 3; ++s) {
    const auto& p = b.placement[s];
    sets.push_back({{"name", set_name(s)}, {"copies", p.copies}, {"output", p.output}, {"steps", p.steps}, {"inp", b.inp[s]}});
  }
  json homs = json::array();
  for (const auto& h : b.homs) homs.push_back({{"name", h.name}, {"hom", hom_to_json(h.hom)}});
  return {{"format", kFormatVersion},
          {"type", "bundle"},
          {"preset", b.preset},
          {"dims", {b.dims.l, b.dims.m, b.dims.n}},
          {"machine", machine_to_json(b.machine)},
          {"time", time_to_json(b.time)},
          {"placement_depth", b.placement_depth},
          {"phases", b.phases},
          {"slots", slots},
          {"sets", sets},
          {"homs", homs}};
}

ScheduleBundle bundle_from_json(const json& j) {
  return guarded("bundle", [&]() -> ScheduleBundle {
    if (j.at("format").get<int>() != kFormatVersion) bad("unsupported format version");
    ScheduleBundle b;
    b.preset = j.value("preset", "");
    auto d = j.at("dims").get<std::vector<int>>();
    if (d.size() != 3) bad("dims must have three entries");
    b.dims = instance(d[0], d[1], d[2]);
    b.machine = machine_from_json(j.at("machine"));
    b.time = time_from_json(j.at("time"));
    b.placement_depth = j.at("placement_depth").get<int>();
    if (b.placement_depth < 0 || b.placement_depth > static_cast<int>(b.time.levels.size()))
      bad("placement depth exceeds the time levels");
    b.phases = j.at("phases").get<std::vector<std::string>>();
    const int steps = b.placement_steps();
    if (static_cast<int>(b.phases.size()) != steps) bad("one phase label per placement step");
    for (const auto& s : j.at("slots")) {
      if (!s.is_array() || s.size() != 5) bad("slot must be [i, j, k, node, time]");
      b.slots.push_back(Slot{s[0].get<int>(), s[1].get<int>(), s[2].get<int>(), s[3].get<int>(),
                             s[4].get<std::vector<int>>()});
    }
    const auto& sets = j.at("sets");
    if (!sets.is_array() || sets.size() != 3) bad("need placements for A, B and C");
    for (int s = 0; s < 3; ++s) {
      auto& p = b.placement[s];
      p.copies = sets[s].at("copies").get<int>();
      p.output = sets[s].at("output").get<bool>();
      p.steps = sets[s].at("steps").get<std::vector<std::vector<int>>>();
      b.inp[s] = sets[s].at("inp").get<std::vector<int>>();
      if (p.copies < 1) bad("copies must be positive");
      if (static_cast<int>(p.steps.size()) != steps) bad(std::string("set ") + set_name(s) + ": wrong step count");
      for (const auto& st : p.steps)
        if (static_cast<long long>(st.size()) != 1LL * b.dims.set_size(s) * p.copies)
          bad(std::string("set ") + set_name(s) + ": wrong placement width");
      if (b.inp[s].size() != b.slots.size()) bad(std::string("set ") + set_name(s) + ": one copy index per slot");
    }
    for (const auto& h : j.at("homs")) b.homs.push_back({h.at("name").get<std::string>(), hom_from_json(h.at("hom"))});
    return b;
  });
}

json report_to_json(const CostReport& r) {
  json per_set = json::object();
  for (int s = 0; s < 3; ++s) per_set[set_name(s)] = cost_json(r.per_set[s]);
  json trans = json::array();
  for (const auto& t : r.per_transition) trans.push_back(cost_json(t));
  json viol = json::array();
  for (const auto& v : r.violations)
    viol.push_back({{"kind", violation_label(v.kind)}, {"node", v.node}, {"time", v.time}, {"detail", v.detail}});
  return {{"format", kFormatVersion},
          {"type", "report"},
          {"machine", r.machine},
          {"traffic", cost_json(r.traffic)},
          {"total", r.total()},
          {"main_traffic", cost_json(r.main_traffic)},
          {"per_set", per_set},
          {"per_transition", trans},
          {"node_sent", r.node_sent},
          {"node_sent_main", r.node_sent_main},
          {"max_node_sent", r.max_node_sent},
          {"max_node_sent_main", r.max_node_sent_main},
          {"peak_memory", r.peak_memory},
          {"max_memory", r.max_memory},
          {"makespan", r.makespan},
          {"coverage", r.coverage},
          {"merges", r.merges},
          {"injections", r.injections},
          {"drains", r.drains},
          {"weighted_total", r.weighted_total},
          {"violations", viol}};
}

}  // namespace symsched
