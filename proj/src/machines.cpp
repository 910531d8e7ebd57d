#include "symsched/machines.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace symsched {

const char* kind_label(MachineKind k) {
  switch (k) {
    case MachineKind::Torus: return "torus";
    case MachineKind::FatTree: return "fat_tree";
    case MachineKind::Pmh: return "pmh";
    case MachineKind::Hex: return "hex";
  }
  return "?";
}

std::string describe(const MachineSpec& s) {
  std::ostringstream os;
  os << kind_label(s.kind);
  switch (s.kind) {
    case MachineKind::Torus:
      os << " dims=";
      for (std::size_t i = 0; i < s.dims.size(); ++i) os << (i ? "," : "") << s.dims[i];
      break;
    case MachineKind::FatTree:
      os << " levels=" << s.levels;
      break;
    case MachineKind::Pmh:
      os << " pmh=";
      for (std::size_t i = 0; i < s.pmh.size(); ++i) os << (i ? "," : "") << s.pmh[i].M << ':' << s.pmh[i].f;
      break;
    case MachineKind::Hex:
      os << " window=" << s.window;
      break;
  }
  os << " memory_words=" << s.memory_words;
  for (const auto& [k, w] : s.weights) os << " weight." << k << '=' << w;
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& s, int line) {
  std::string t = trim(s);
  char* end = nullptr;
  long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0')
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": expected integer, got '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char c) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, c)) out.push_back(cur);
  return out;
}

bool is_pow2(long long x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

MachineSpec parse_machine_config(const std::string& text) {
  MachineSpec s;
  bool have_kind = false;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    auto eq = raw.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": missing '='");
    std::string key = trim(raw.substr(0, eq)), val = trim(raw.substr(eq + 1));
    if (key == "kind") {
      have_kind = true;
      if (val == "torus") s.kind = MachineKind::Torus;
      else if (val == "fat_tree" || val == "fat-tree") s.kind = MachineKind::FatTree;
      else if (val == "pmh") s.kind = MachineKind::Pmh;
      else if (val == "hex") s.kind = MachineKind::Hex;
      else throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": unknown kind " + val);
    } else if (key == "dims") {
      s.dims.clear();
      for (const auto& p : split(val, ',')) s.dims.push_back(static_cast<int>(parse_int(p, line)));
    } else if (key == "levels") {
      if (val.find(':') != std::string::npos) {
        s.pmh.clear();
        for (const auto& p : split(val, ',')) {
          auto c = p.find(':');
          if (c == std::string::npos)
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": expected M:f");
          s.pmh.push_back({parse_int(p.substr(0, c), line), parse_int(p.substr(c + 1), line)});
        }
      } else {
        s.levels = static_cast<int>(parse_int(val, line));
      }
    } else if (key == "window") {
      s.window = static_cast<int>(parse_int(val, line));
    } else if (key == "memory_words") {
      s.memory_words = static_cast<int>(parse_int(val, line));
    } else if (key.rfind("weight.", 0) == 0) {
      long long w = parse_int(val, line);
      if (w < 0) throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": negative weight");
      s.weights[key.substr(7)] = w;
    } else {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": unknown key " + key);
    }
  }
  if (!have_kind) throw Error(ErrorKind::ParseError, "missing kind");
  return s;
}

MachineSpec load_machine_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_machine_config(ss.str());
}

MachineModel::MachineModel(MachineSpec spec) : spec_(std::move(spec)) {
  if (spec_.memory_words < 0) throw Error(ErrorKind::InvalidArgument, "negative memory");
  switch (spec_.kind) {
    case MachineKind::Torus: {
      if (spec_.dims.empty()) throw Error(ErrorKind::InvalidArgument, "torus needs dims");
      long long n = 1;
      std::vector<long long> mods;
      for (int d : spec_.dims) {
        if (d < 1) throw Error(ErrorKind::InvalidArgument, "torus extent must be positive");
        n *= d;
        if (n > 10000000) throw Error(ErrorKind::SizeCap, "torus too large");
        mods.push_back(d);
      }
      nodes_ = static_cast<int>(n);
      processor_.assign(nodes_, 1);
      for (std::size_t d = 0; d < spec_.dims.size(); ++d) classes_.push_back("torus-dim-" + std::to_string(d));
      network_ = abelian(mods);
      break;
    }
    case MachineKind::FatTree: {
      if (spec_.levels < 1 || spec_.levels > 20) throw Error(ErrorKind::InvalidArgument, "fat tree levels out of range");
      nodes_ = 1 << spec_.levels;
      processor_.assign(nodes_, 1);
      for (int l = 1; l <= spec_.levels; ++l) classes_.push_back("tree-level-" + std::to_string(l));
      network_ = iterated_wreath(2, spec_.levels);
      break;
    }
    case MachineKind::Pmh: {
      const auto& lv = spec_.pmh;
      if (lv.empty()) throw Error(ErrorKind::InvalidHierarchy, "no levels");
      for (std::size_t i = 0; i < lv.size(); ++i) {
        if (lv[i].M % 3 != 0 || !is_pow2(lv[i].M / 3))
          throw Error(ErrorKind::InvalidHierarchy, "M_" + std::to_string(i + 1) + " is not 3*2^d");
        if (!is_pow2(lv[i].f))
          throw Error(ErrorKind::InvalidHierarchy, "f_" + std::to_string(i + 1) + " is not a power of two");
        long long below = i == 0 ? 3 : lv[i - 1].M;
        if (lv[i].M < below || lv[i].M % below != 0)
          throw Error(ErrorKind::InvalidHierarchy, "M_" + std::to_string(i + 1) + " does not nest");
        if (lv[i].f > lv[i].M / below)
          throw Error(ErrorKind::InvalidHierarchy, "f_" + std::to_string(i + 1) + " exceeds the children");
      }
      if (lv.back().M / 3 > 10000000) throw Error(ErrorKind::SizeCap, "pmh too large");
      nodes_ = static_cast<int>(lv.back().M / 3);
      processor_.assign(nodes_, 0);
      for (int n = 0; n < nodes_; ++n) {
        bool p = (n % (lv[0].M / 3)) < lv[0].f;
        for (std::size_t i = 1; i < lv.size() && p; ++i) {
          long long child = lv[i - 1].M / 3, self = lv[i].M / 3;
          p = ((n % self) / child) < lv[i].f;
        }
        processor_[n] = p;
      }
      for (std::size_t i = 1; i <= lv.size(); ++i) classes_.push_back("level-" + std::to_string(i));
      FiniteGroup g = symmetric(static_cast<int>(lv[0].M / 3));
      for (std::size_t i = 1; i < lv.size(); ++i) {
        int b = static_cast<int>(lv[i].M / lv[i - 1].M);
        g = wreath(g, b, symmetric(b));
      }
      network_ = g;
      break;
    }
    case MachineKind::Hex: {
      if (spec_.window < 1 || spec_.window > 3000) throw Error(ErrorKind::InvalidArgument, "hex window out of range");
      nodes_ = spec_.window * spec_.window;
      processor_.assign(nodes_, 1);
      classes_ = {"hex+g1", "hex-g1", "hex+g2", "hex-g2", "hex+g3", "hex-g3"};
      network_ = abelian({0, 0});
      break;
    }
  }
  if (spec_.kind != MachineKind::Hex) {
    const FiniteGroup& G = network_;
    MachineModel* self = this;
    ActionSet set{kind_label(spec_.kind), {}};
    for (int n = 0; n < nodes_; ++n) set.points.push_back(node_label(n));
    action_ = std::make_shared<GroupAction>(GroupAction::from_rule(
        G, set, [self](const GroupElement& g, int x) { return self->translate(g, x); }));
  }
}

std::string MachineModel::node_label(int node) const {
  switch (spec_.kind) {
    case MachineKind::Torus:
    case MachineKind::Hex: {
      auto c = coords(node);
      std::string s = "(";
      for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
      return s + ")";
    }
    case MachineKind::FatTree: {
      std::string s = "P";
      for (int l = 0; l < spec_.levels; ++l) s += ((node >> l) & 1) ? '1' : '0';
      return s;
    }
    case MachineKind::Pmh:
      return "n" + std::to_string(node);
  }
  return "";
}

int MachineModel::processor_count() const {
  return static_cast<int>(std::count(processor_.begin(), processor_.end(), 1));
}

long long MachineModel::weight(const std::string& cls) const {
  auto it = spec_.weights.find(cls);
  return it == spec_.weights.end() ? 1 : it->second;
}

const GroupAction& MachineModel::node_action() const {
  if (!action_) throw Error(ErrorKind::StructureMismatch, "hex window has only a partial action");
  return *action_;
}

std::vector<int> MachineModel::coords(int node) const {
  if (node < 0 || node >= nodes_) throw Error(ErrorKind::NotInSet, "node out of range");
  if (spec_.kind == MachineKind::Hex) return {node / spec_.window, node % spec_.window};
  if (spec_.kind != MachineKind::Torus) throw Error(ErrorKind::StructureMismatch, "no coordinates");
  std::vector<int> c(spec_.dims.size());
  for (int d = static_cast<int>(spec_.dims.size()) - 1; d >= 0; --d) {
    c[d] = node % spec_.dims[d];
    node /= spec_.dims[d];
  }
  return c;
}

int MachineModel::node_at(const std::vector<int>& c) const {
  if (spec_.kind == MachineKind::Hex) {
    if (c.size() != 2 || c[0] < 0 || c[1] < 0 || c[0] >= spec_.window || c[1] >= spec_.window)
      throw Error(ErrorKind::WindowOverflow, "lattice point outside the window");
    return c[0] * spec_.window + c[1];
  }
  if (spec_.kind != MachineKind::Torus || c.size() != spec_.dims.size())
    throw Error(ErrorKind::StructureMismatch, "bad coordinates");
  int n = 0;
  for (std::size_t d = 0; d < c.size(); ++d) {
    int q = spec_.dims[d];
    n = n * q + ((c[d] % q) + q) % q;
  }
  return n;
}

int MachineModel::pmh_cache_nodes(int level) const {
  return static_cast<int>(spec_.pmh.at(level - 1).M / 3);
}

int MachineModel::pmh_common_level(int a, int b) const {
  for (int i = 1; i <= pmh_levels(); ++i) {
    int s = pmh_cache_nodes(i);
    if (a / s == b / s) return i;
  }
  return pmh_levels();
}

int MachineModel::translate(const GroupElement& g, int node) const {
  if (node < 0 || node >= nodes_) throw Error(ErrorKind::NotInSet, "node out of range");
  switch (spec_.kind) {
    case MachineKind::Torus:
    case MachineKind::Hex: {
      network_.check(g);
      auto c = coords(node);
      for (std::size_t d = 0; d < c.size(); ++d) c[d] += static_cast<int>(g.modvec().r[d]);
      return node_at(c);
    }
    default:
      return network_.act(g, node);
  }
}

namespace {

int wrap_dist(long long delta, int q) {
  long long r = ((delta % q) + q) % q;
  return static_cast<int>(std::min<long long>(r, q - r));
}

void hex_route(long long du, long long dv, ClassCost& out) {
  auto add = [&out](const std::string& k, long long v) {
    if (v > 0) out[k] += v;
  };
  if ((du >= 0 && dv >= 0) || (du <= 0 && dv <= 0)) {
    long long m = std::min(std::llabs(du), std::llabs(dv));
    bool pos = du > 0 || dv > 0;
    add(pos ? "hex+g1" : "hex-g1", m);
    add(du >= 0 ? "hex+g2" : "hex-g2", std::llabs(du) - m);
    add(dv >= 0 ? "hex+g3" : "hex-g3", std::llabs(dv) - m);
  } else {
    add(du > 0 ? "hex+g2" : "hex-g2", std::llabs(du));
    add(dv > 0 ? "hex+g3" : "hex-g3", std::llabs(dv));
  }
}

}  // namespace

ClassCost MachineModel::move_cost(int from, int to) const {
  ClassCost out;
  if (from < 0 || from >= nodes_ || to < 0 || to >= nodes_)
    throw Error(ErrorKind::UnroutableMove, "endpoint outside the machine");
  if (from == to) return out;
  switch (spec_.kind) {
    case MachineKind::Torus: {
      auto a = coords(from), b = coords(to);
      for (std::size_t d = 0; d < a.size(); ++d) {
        int h = wrap_dist(b[d] - a[d], spec_.dims[d]);
        if (h) out["torus-dim-" + std::to_string(d)] += h;
      }
      break;
    }
    case MachineKind::FatTree: {
      int x = from ^ to, h = 0;
      while (x) {
        ++h;
        x >>= 1;
      }
      for (int l = 1; l <= h; ++l) out["tree-level-" + std::to_string(l)] += 1;
      break;
    }
    case MachineKind::Pmh:
      out["level-" + std::to_string(pmh_common_level(from, to))] += 1;
      break;
    case MachineKind::Hex: {
      auto a = coords(from), b = coords(to);
      hex_route(b[0] - a[0], b[1] - a[1], out);
      break;
    }
  }
  return out;
}

ClassCost MachineModel::link_cost(const GroupElement& g) const {
  network_.check(g);
  ClassCost out;
  switch (spec_.kind) {
    case MachineKind::Torus:
      for (std::size_t d = 0; d < spec_.dims.size(); ++d) {
        int h = wrap_dist(g.modvec().r[d], spec_.dims[d]);
        if (h) out["torus-dim-" + std::to_string(d)] += h;
      }
      break;
    case MachineKind::Hex:
      hex_route(g.modvec().r[0], g.modvec().r[1], out);
      break;
    default:
      for (int n = 0; n < nodes_; ++n)
        for (const auto& [k, v] : move_cost(n, network_.act(g, n))) out[k] += v;
      break;
  }
  return out;
}

MachineModel torus(std::vector<int> dims, int memory_words) {
  MachineSpec s;
  s.kind = MachineKind::Torus;
  s.dims = std::move(dims);
  s.memory_words = memory_words;
  return MachineModel(s);
}

MachineModel fat_tree(int k, int memory_words) {
  MachineSpec s;
  s.kind = MachineKind::FatTree;
  s.levels = k;
  s.memory_words = memory_words;
  return MachineModel(s);
}

MachineModel pmh(std::vector<PmhLevel> levels) {
  MachineSpec s;
  s.kind = MachineKind::Pmh;
  s.pmh = std::move(levels);
  s.memory_words = 3;
  return MachineModel(s);
}

MachineModel hex_array(int window, int memory_words) {
  MachineSpec s;
  s.kind = MachineKind::Hex;
  s.window = window;
  s.memory_words = memory_words;
  return MachineModel(s);
}

MachineModel build_machine(const MachineSpec& spec) { return MachineModel(spec); }

GroupElement hex_g1() { return modvec({1, 1}); }
GroupElement hex_g2() { return modvec({1, 0}); }
GroupElement hex_g3() { return modvec({0, 1}); }

long long TimeModel::clock(const std::vector<int>& v) const {
  if (v.size() != levels.size()) throw Error(ErrorKind::StructureMismatch, "time vector has wrong depth");
  long long c = 0;
  for (std::size_t l = 0; l < v.size(); ++l) {
    if (v[l] < 0 || v[l] >= levels[l]) throw Error(ErrorKind::StructureMismatch, "time component out of range");
    c += stretch[l] * v[l];
  }
  return c;
}

long long TimeModel::total_steps() const {
  long long t = 1;
  for (int l : levels) t *= l;
  return t;
}

TimeModel time_model(std::vector<int> levels) {
  TimeModel tm;
  for (int l : levels)
    if (l < 1) throw Error(ErrorKind::InvalidArgument, "time level extent must be positive");
  tm.levels = std::move(levels);
  tm.stretch.assign(tm.levels.size(), 1);
  long long w = 1;
  for (int l = static_cast<int>(tm.levels.size()) - 1; l >= 0; --l) {
    tm.stretch[l] = w;
    w *= tm.levels[l];
  }
  return tm;
}

TimeModel flatten_time(const TimeModel& tm, std::vector<long long> stretch) {
  if (stretch.size() != tm.levels.size())
    throw Error(ErrorKind::InvalidArgument, "one stretch factor per level");
  for (long long s : stretch)
    if (s < 1) throw Error(ErrorKind::InvalidArgument, "stretch factors must be positive");
  TimeModel out = tm;
  out.stretch = std::move(stretch);
  return out;
}

}  // namespace symsched
