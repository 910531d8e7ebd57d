#include "symsched/groups.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace symsched {

Perm Perm::identity(int n) {
  Perm p;
  p.images.resize(n);
  std::iota(p.images.begin(), p.images.end(), 0);
  return p;
}

Perm Perm::cycle(int n, int k) {
  Perm p;
  p.images.resize(n);
  for (int i = 0; i < n; ++i) p.images[i] = static_cast<int>(((i + k) % n + n) % n);
  return p;
}

Perm perm_compose(const Perm& a, const Perm& b) {
  if (a.degree() != b.degree())
    throw Error(ErrorKind::StructureMismatch, "permutation degrees differ");
  Perm r;
  r.images.resize(b.images.size());
  for (std::size_t i = 0; i < b.images.size(); ++i) r.images[i] = a.images[b.images[i]];
  return r;
}

Perm perm_inverse(const Perm& a) {
  Perm r;
  r.images.resize(a.images.size());
  for (std::size_t i = 0; i < a.images.size(); ++i) r.images[a.images[i]] = static_cast<int>(i);
  return r;
}

bool perm_valid(const Perm& a) {
  std::vector<char> seen(a.images.size(), 0);
  for (int x : a.images) {
    if (x < 0 || x >= a.degree() || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

GroupElement modvec(std::vector<long long> r) { return GroupElement(ModVec{std::move(r)}); }
GroupElement tuple(std::vector<GroupElement> parts) {
  return GroupElement(ProductTuple{std::move(parts)});
}

namespace {

void encode_into(const GroupElement& g, std::vector<long long>& out) {
  if (g.is_perm()) {
    out.push_back(0);
    out.push_back(g.perm().degree());
    for (int x : g.perm().images) out.push_back(x);
  } else if (g.is_modvec()) {
    out.push_back(1);
    out.push_back(static_cast<long long>(g.modvec().r.size()));
    for (long long x : g.modvec().r) out.push_back(x);
  } else if (g.is_wreath()) {
    const auto& w = g.wreath();
    out.push_back(2);
    out.push_back(static_cast<long long>(w.base.size()));
    for (const auto& b : w.base) encode_into(b, out);
    encode_into(GroupElement(w.top), out);
  } else {
    const auto& t = g.product();
    out.push_back(3);
    out.push_back(static_cast<long long>(t.parts.size()));
    for (const auto& p : t.parts) encode_into(p, out);
  }
}

}  // namespace

std::vector<long long> encode(const GroupElement& g) {
  std::vector<long long> out;
  encode_into(g, out);
  return out;
}

bool operator==(const GroupElement& a, const GroupElement& b) { return encode(a) == encode(b); }
bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
bool operator<(const GroupElement& a, const GroupElement& b) { return encode(a) < encode(b); }

std::size_t ElementHash::operator()(const GroupElement& g) const {
  std::size_t h = 1469598103934665603ull;
  for (long long x : encode(g)) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

std::string to_string(const GroupElement& g) {
  std::ostringstream os;
  auto list = [&os](const auto& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
  };
  if (g.is_perm()) {
    os << 'p';
    list(g.perm().images);
  } else if (g.is_modvec()) {
    os << 'v';
    list(g.modvec().r);
  } else if (g.is_wreath()) {
    os << "w(";
    for (const auto& b : g.wreath().base) os << to_string(b) << ';';
    os << to_string(GroupElement(g.wreath().top)) << ')';
  } else {
    os << "t(";
    const auto& parts = g.product().parts;
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << to_string(parts[i]);
    os << ')';
  }
  return os.str();
}

struct FiniteGroup::Impl {
  GroupKind kind = GroupKind::Abelian;
  std::string name;
  std::vector<long long> moduli;
  int n = 0;
  std::vector<FiniteGroup> factors;
  int blocks = 0;
  std::vector<GroupElement> gens;
  std::vector<std::string> gen_names;
  std::size_t cap = kDefaultEnumerationCap;
  std::vector<GroupElement> elements;  // Generated only, sorted
};

namespace {

std::optional<std::uint64_t> mul_checked(std::optional<std::uint64_t> a,
                                         std::optional<std::uint64_t> b) {
  if (!a || !b) return std::nullopt;
  if (*a != 0 && *b > std::numeric_limits<std::uint64_t>::max() / *a) return std::nullopt;
  return *a * *b;
}

long long mod_norm(long long x, long long m) {
  if (m == 0) return x;
  x %= m;
  return x < 0 ? x + m : x;
}

}  // namespace

FiniteGroup::FiniteGroup() : FiniteGroup(abelian({})) {}

GroupKind FiniteGroup::kind() const { return p_->kind; }
const std::string& FiniteGroup::name() const { return p_->name; }
const std::vector<GroupElement>& FiniteGroup::generators() const { return p_->gens; }
const std::vector<std::string>& FiniteGroup::generator_names() const { return p_->gen_names; }
std::size_t FiniteGroup::enumeration_cap() const { return p_->cap; }
const std::vector<long long>& FiniteGroup::moduli() const { return p_->moduli; }
int FiniteGroup::n() const { return p_->n; }
const std::vector<FiniteGroup>& FiniteGroup::factors() const { return p_->factors; }
int FiniteGroup::blocks() const { return p_->blocks; }
const FiniteGroup& FiniteGroup::parent() const { return p_->factors.at(0); }

FiniteGroup FiniteGroup::with_cap(std::size_t cap) const {
  auto impl = std::make_shared<Impl>(*p_);
  impl->cap = cap;
  return FiniteGroup(impl);
}

GroupElement FiniteGroup::identity() const {
  switch (p_->kind) {
    case GroupKind::Abelian:
      return modvec(std::vector<long long>(p_->moduli.size(), 0));
    case GroupKind::Symmetric:
    case GroupKind::Shift:
      return Perm::identity(p_->n);
    case GroupKind::Product: {
      std::vector<GroupElement> parts;
      for (const auto& f : p_->factors) parts.push_back(f.identity());
      return tuple(std::move(parts));
    }
    case GroupKind::Wreath: {
      WreathTuple w;
      w.base.assign(p_->blocks, p_->factors[0].identity());
      w.top = Perm::identity(p_->blocks);
      return w;
    }
    case GroupKind::Generated:
      return parent().identity();
  }
  return {};
}

bool FiniteGroup::matches(const GroupElement& a) const {
  switch (p_->kind) {
    case GroupKind::Abelian: {
      if (!a.is_modvec() || a.modvec().r.size() != p_->moduli.size()) return false;
      for (std::size_t i = 0; i < p_->moduli.size(); ++i) {
        long long m = p_->moduli[i], x = a.modvec().r[i];
        if (m > 0 && (x < 0 || x >= m)) return false;
      }
      return true;
    }
    case GroupKind::Symmetric:
    case GroupKind::Shift:
      return a.is_perm() && a.perm().degree() == p_->n && perm_valid(a.perm());
    case GroupKind::Product: {
      if (!a.is_product() || a.product().parts.size() != p_->factors.size()) return false;
      for (std::size_t i = 0; i < p_->factors.size(); ++i)
        if (!p_->factors[i].matches(a.product().parts[i])) return false;
      return true;
    }
    case GroupKind::Wreath: {
      if (!a.is_wreath()) return false;
      const auto& w = a.wreath();
      if (static_cast<int>(w.base.size()) != p_->blocks) return false;
      for (const auto& b : w.base)
        if (!p_->factors[0].matches(b)) return false;
      return p_->factors[1].matches(GroupElement(w.top));
    }
    case GroupKind::Generated:
      return parent().matches(a);
  }
  return false;
}

void FiniteGroup::check(const GroupElement& a) const {
  if (!matches(a))
    throw Error(ErrorKind::StructureMismatch, to_string(a) + " does not fit " + p_->name);
}

bool FiniteGroup::contains(const GroupElement& a) const {
  if (!matches(a)) return false;
  switch (p_->kind) {
    case GroupKind::Abelian:
    case GroupKind::Symmetric:
      return true;
    case GroupKind::Shift: {
      const auto& im = a.perm().images;
      int q = p_->n;
      for (int i = 0; i < q; ++i)
        if (im[i] != (i + im[0]) % q) return false;
      return true;
    }
    case GroupKind::Product:
      for (std::size_t i = 0; i < p_->factors.size(); ++i)
        if (!p_->factors[i].contains(a.product().parts[i])) return false;
      return true;
    case GroupKind::Wreath:
      for (const auto& b : a.wreath().base)
        if (!p_->factors[0].contains(b)) return false;
      return p_->factors[1].contains(GroupElement(a.wreath().top));
    case GroupKind::Generated:
      return std::binary_search(p_->elements.begin(), p_->elements.end(), a);
  }
  return false;
}

GroupElement FiniteGroup::compose(const GroupElement& a, const GroupElement& b) const {
  check(a);
  check(b);
  switch (p_->kind) {
    case GroupKind::Abelian: {
      std::vector<long long> r(p_->moduli.size());
      for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = mod_norm(a.modvec().r[i] + b.modvec().r[i], p_->moduli[i]);
      return modvec(std::move(r));
    }
    case GroupKind::Symmetric:
    case GroupKind::Shift:
      return perm_compose(a.perm(), b.perm());
    case GroupKind::Product: {
      std::vector<GroupElement> parts;
      for (std::size_t i = 0; i < p_->factors.size(); ++i)
        parts.push_back(p_->factors[i].compose(a.product().parts[i], b.product().parts[i]));
      return tuple(std::move(parts));
    }
    case GroupKind::Wreath: {
      // b first: (β,o) -> (τ(β), b_β(o)); then a
      const auto& wa = a.wreath();
      const auto& wb = b.wreath();
      WreathTuple r;
      r.top = perm_compose(wa.top, wb.top);
      r.base.reserve(p_->blocks);
      for (int beta = 0; beta < p_->blocks; ++beta)
        r.base.push_back(p_->factors[0].compose(wa.base[wb.top.images[beta]], wb.base[beta]));
      return r;
    }
    case GroupKind::Generated:
      return parent().compose(a, b);
  }
  return {};
}

GroupElement FiniteGroup::inverse(const GroupElement& a) const {
  check(a);
  switch (p_->kind) {
    case GroupKind::Abelian: {
      std::vector<long long> r(p_->moduli.size());
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_norm(-a.modvec().r[i], p_->moduli[i]);
      return modvec(std::move(r));
    }
    case GroupKind::Symmetric:
    case GroupKind::Shift:
      return perm_inverse(a.perm());
    case GroupKind::Product: {
      std::vector<GroupElement> parts;
      for (std::size_t i = 0; i < p_->factors.size(); ++i)
        parts.push_back(p_->factors[i].inverse(a.product().parts[i]));
      return tuple(std::move(parts));
    }
    case GroupKind::Wreath: {
      const auto& w = a.wreath();
      WreathTuple r;
      r.top = perm_inverse(w.top);
      r.base.reserve(p_->blocks);
      for (int g = 0; g < p_->blocks; ++g)
        r.base.push_back(p_->factors[0].inverse(w.base[r.top.images[g]]));
      return r;
    }
    case GroupKind::Generated:
      return parent().inverse(a);
  }
  return {};
}

GroupElement FiniteGroup::power(const GroupElement& a, long long k) const {
  GroupElement base = k < 0 ? inverse(a) : a;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  GroupElement acc = identity();
  while (e) {
    if (e & 1) acc = compose(acc, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return acc;
}

std::optional<std::uint64_t> FiniteGroup::order() const {
  switch (p_->kind) {
    case GroupKind::Abelian: {
      std::optional<std::uint64_t> o = 1;
      for (long long m : p_->moduli) {
        if (m == 0) return std::nullopt;
        o = mul_checked(o, static_cast<std::uint64_t>(m));
      }
      return o;
    }
    case GroupKind::Symmetric: {
      std::optional<std::uint64_t> o = 1;
      for (int i = 2; i <= p_->n; ++i) o = mul_checked(o, static_cast<std::uint64_t>(i));
      return o;
    }
    case GroupKind::Shift:
      return static_cast<std::uint64_t>(p_->n);
    case GroupKind::Product: {
      std::optional<std::uint64_t> o = 1;
      for (const auto& f : p_->factors) o = mul_checked(o, f.order());
      return o;
    }
    case GroupKind::Wreath: {
      auto b = p_->factors[0].order();
      std::optional<std::uint64_t> o = 1;
      for (int i = 0; i < p_->blocks; ++i) o = mul_checked(o, b);
      return mul_checked(o, p_->factors[1].order());
    }
    case GroupKind::Generated:
      return static_cast<std::uint64_t>(p_->elements.size());
  }
  return std::nullopt;
}

bool FiniteGroup::is_perm_group() const {
  switch (p_->kind) {
    case GroupKind::Symmetric:
    case GroupKind::Shift:
      return true;
    case GroupKind::Wreath:
      return p_->factors[0].is_perm_group();
    case GroupKind::Generated:
      return parent().is_perm_group();
    default:
      return false;
  }
}

int FiniteGroup::degree() const {
  switch (p_->kind) {
    case GroupKind::Symmetric:
    case GroupKind::Shift:
      return p_->n;
    case GroupKind::Wreath:
      return p_->factors[0].degree() * p_->blocks;
    case GroupKind::Generated:
      return parent().degree();
    default:
      throw Error(ErrorKind::StructureMismatch, p_->name + " is not a permutation group");
  }
}

int FiniteGroup::act(const GroupElement& g, int point) const {
  switch (p_->kind) {
    case GroupKind::Symmetric:
    case GroupKind::Shift:
      return g.perm().images.at(point);
    case GroupKind::Wreath: {
      const FiniteGroup& base = p_->factors[0];
      int d = base.degree();
      int beta = point / d, o = point % d;
      return g.wreath().top.images.at(beta) * d + base.act(g.wreath().base.at(beta), o);
    }
    case GroupKind::Generated:
      return parent().act(g, point);
    default:
      throw Error(ErrorKind::StructureMismatch, p_->name + " does not act on points");
  }
}

Perm FiniteGroup::as_perm(const GroupElement& g) const {
  check(g);
  if (g.is_perm()) return g.perm();
  int d = degree();
  Perm p;
  p.images.resize(d);
  for (int i = 0; i < d; ++i) p.images[i] = act(g, i);
  return p;
}

std::optional<GroupElement> FiniteGroup::from_perm(const Perm& p) const {
  if (!is_perm_group() || p.degree() != degree() || !perm_valid(p)) return std::nullopt;
  switch (p_->kind) {
    case GroupKind::Symmetric:
    case GroupKind::Shift: {
      GroupElement g(p);
      if (!contains(g)) return std::nullopt;
      return g;
    }
    case GroupKind::Wreath: {
      const FiniteGroup& base = p_->factors[0];
      int d = base.degree();
      WreathTuple w;
      w.top.images.resize(p_->blocks);
      for (int beta = 0; beta < p_->blocks; ++beta) {
        int tb = p.images[beta * d] / d;
        Perm bp;
        bp.images.resize(d);
        for (int o = 0; o < d; ++o) {
          int img = p.images[beta * d + o];
          if (img / d != tb) return std::nullopt;
          bp.images[o] = img % d;
        }
        auto be = base.from_perm(bp);
        if (!be) return std::nullopt;
        w.top.images[beta] = tb;
        w.base.push_back(*be);
      }
      if (!p_->factors[1].contains(GroupElement(w.top))) return std::nullopt;
      return GroupElement(std::move(w));
    }
    case GroupKind::Generated: {
      auto g = parent().from_perm(p);
      if (!g || !contains(*g)) return std::nullopt;
      return g;
    }
    default:
      return std::nullopt;
  }
}

std::vector<std::pair<GroupElement, Word>> FiniteGroup::enumerate_with_words() const {
  auto ord = order();
  if (!ord || *ord > p_->cap)
    throw Error(ErrorKind::CapExceeded,
                p_->name + " order exceeds enumeration cap " + std::to_string(p_->cap));
  std::vector<std::pair<GroupElement, Word>> out;
  std::unordered_map<GroupElement, std::size_t, ElementHash> seen;
  out.emplace_back(identity(), Word{});
  seen.emplace(out[0].first, 0);
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (std::size_t s = 0; s < p_->gens.size(); ++s) {
      GroupElement h = compose(p_->gens[s], out[head].first);
      if (seen.count(h)) continue;
      Word w;
      w.reserve(out[head].second.size() + 1);
      w.emplace_back(static_cast<int>(s), 1);
      w.insert(w.end(), out[head].second.begin(), out[head].second.end());
      seen.emplace(h, out.size());
      out.emplace_back(std::move(h), std::move(w));
      if (out.size() > p_->cap)
        throw Error(ErrorKind::CapExceeded, p_->name + " closure exceeds cap");
    }
  }
  return out;
}

std::vector<GroupElement> FiniteGroup::enumerate() const {
  if (p_->kind == GroupKind::Generated) return p_->elements;
  auto ww = enumerate_with_words();
  std::vector<GroupElement> out;
  out.reserve(ww.size());
  for (auto& [g, w] : ww) out.push_back(std::move(g));
  std::sort(out.begin(), out.end());
  return out;
}

GroupElement FiniteGroup::eval_word(const Word& w) const {
  GroupElement acc = identity();
  for (const auto& [s, k] : w) acc = compose(acc, power(p_->gens.at(s), k));
  return acc;
}

namespace {

Word words_by_search(const FiniteGroup& G, const GroupElement& g) {
  for (auto& [h, w] : G.enumerate_with_words())
    if (h == g) return w;
  throw Error(ErrorKind::NotInGroup, to_string(g) + " not in " + G.name());
}

// smallest block in the top orbit of each block
std::vector<int> block_reps(const FiniteGroup& top, int blocks) {
  std::vector<int> rep(blocks, -1);
  for (int r = 0; r < blocks; ++r) {
    if (rep[r] >= 0) continue;
    std::vector<int> q{r};
    rep[r] = r;
    for (std::size_t h = 0; h < q.size(); ++h)
      for (const auto& g : top.generators()) {
        int y = g.perm().images[q[h]];
        if (rep[y] < 0) {
          rep[y] = r;
          q.push_back(y);
        }
      }
  }
  return rep;
}

std::vector<int> distinct_reps(const std::vector<int>& rep) {
  std::vector<int> out;
  for (std::size_t b = 0; b < rep.size(); ++b)
    if (rep[b] == static_cast<int>(b)) out.push_back(static_cast<int>(b));
  return out;
}

// some top element sending block r to block gamma (same orbit)
GroupElement top_transversal(const FiniteGroup& top, int r, int gamma) {
  if (r == 0 && top.kind() == GroupKind::Symmetric) {
    Perm p = Perm::identity(top.n());
    std::swap(p.images[0], p.images[gamma]);
    return p;
  }
  if (r == 0 && top.kind() == GroupKind::Shift) return Perm::cycle(top.n(), gamma);
  for (const auto& t : top.enumerate())
    if (top.act(t, r) == gamma) return t;
  throw Error(ErrorKind::StructureMismatch, "blocks in different top orbits");
}

void append_shifted(Word& out, const Word& w, int offset) {
  for (const auto& [s, k] : w) out.emplace_back(s + offset, k);
}

}  // namespace

Word FiniteGroup::express(const GroupElement& g) const {
  if (!contains(g)) throw Error(ErrorKind::NotInGroup, to_string(g) + " not in " + p_->name);
  switch (p_->kind) {
    case GroupKind::Abelian: {
      Word w;
      int gi = 0;
      for (std::size_t i = 0; i < p_->moduli.size(); ++i) {
        if (p_->moduli[i] == 1) continue;
        if (g.modvec().r[i] != 0) w.emplace_back(gi, g.modvec().r[i]);
        ++gi;
      }
      return w;
    }
    case GroupKind::Shift: {
      int k = g.perm().images.empty() ? 0 : g.perm().images[0];
      if (k == 0) return {};
      return {{0, k}};
    }
    case GroupKind::Symmetric: {
      // bubble sort g's images with adjacent swaps; each swap (j j+1) = c^j (0 1) c^-j
      int n = p_->n;
      std::vector<int> a = g.perm().images;
      std::vector<int> swaps;
      for (int pass = 0; pass < n; ++pass)
        for (int j = 0; j + 1 < n; ++j)
          if (a[j] > a[j + 1]) {
            std::swap(a[j], a[j + 1]);
            swaps.push_back(j);
          }
      Word w;
      for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
        int j = *it;
        if (j == 0 || n < 3) {
          w.emplace_back(0, 1);
        } else {
          w.emplace_back(1, j);
          w.emplace_back(0, 1);
          w.emplace_back(1, n - j);
        }
      }
      return w;
    }
    case GroupKind::Product: {
      Word w;
      int offset = 0;
      for (std::size_t i = 0; i < p_->factors.size(); ++i) {
        append_shifted(w, p_->factors[i].express(g.product().parts[i]), offset);
        offset += static_cast<int>(p_->factors[i].generators().size());
      }
      return w;
    }
    case GroupKind::Wreath: {
      // g = B'·(e;π) with B' slot γ holding a_{π⁻¹(γ)}; slot γ = t_γ ι(.) t_γ⁻¹
      const FiniteGroup& base = p_->factors[0];
      const FiniteGroup& top = p_->factors[1];
      int nb = static_cast<int>(base.generators().size());
      auto rep = block_reps(top, p_->blocks);
      auto reps = distinct_reps(rep);
      int toff = nb * static_cast<int>(reps.size());
      const auto& wt = g.wreath();
      Perm pinv = perm_inverse(wt.top);
      Word w;
      for (int gamma = 0; gamma < p_->blocks; ++gamma) {
        const GroupElement& a = wt.base[pinv.images[gamma]];
        if (a == base.identity()) continue;
        int r = rep[gamma];
        int boff = nb * static_cast<int>(std::find(reps.begin(), reps.end(), r) - reps.begin());
        GroupElement t = top_transversal(top, r, gamma);
        append_shifted(w, top.express(t), toff);
        append_shifted(w, base.express(a), boff);
        append_shifted(w, top.express(top.inverse(t)), toff);
      }
      append_shifted(w, top.express(GroupElement(wt.top)), toff);
      return w;
    }
    case GroupKind::Generated:
      return words_by_search(*this, g);
  }
  return {};
}

bool FiniteGroup::same_as(const FiniteGroup& o) const {
  if (p_ == o.p_) return true;
  if (p_->kind != o.p_->kind) return false;
  switch (p_->kind) {
    case GroupKind::Abelian:
      return p_->moduli == o.p_->moduli;
    case GroupKind::Symmetric:
    case GroupKind::Shift:
      return p_->n == o.p_->n;
    case GroupKind::Product:
      if (p_->factors.size() != o.p_->factors.size()) return false;
      for (std::size_t i = 0; i < p_->factors.size(); ++i)
        if (!p_->factors[i].same_as(o.p_->factors[i])) return false;
      return true;
    case GroupKind::Wreath:
      return p_->blocks == o.p_->blocks && p_->factors[0].same_as(o.p_->factors[0]) &&
             p_->factors[1].same_as(o.p_->factors[1]);
    case GroupKind::Generated:
      return parent().same_as(o.parent()) && p_->gens == o.p_->gens;
  }
  return false;
}

FiniteGroup abelian(std::vector<long long> moduli) {
  auto impl = std::make_shared<FiniteGroup::Impl>();
  impl->kind = GroupKind::Abelian;
  for (long long m : moduli)
    if (m < 0) throw Error(ErrorKind::InvalidArgument, "negative modulus");
  impl->moduli = std::move(moduli);
  std::ostringstream nm;
  if (impl->moduli.empty()) nm << "1";
  for (std::size_t i = 0; i < impl->moduli.size(); ++i) {
    nm << (i ? "x" : "") << (impl->moduli[i] == 0 ? std::string("Z") : "Z/" + std::to_string(impl->moduli[i]));
  }
  impl->name = nm.str();
  for (std::size_t i = 0; i < impl->moduli.size(); ++i) {
    if (impl->moduli[i] == 1) continue;  // trivial coordinate
    std::vector<long long> r(impl->moduli.size(), 0);
    r[i] = 1;
    impl->gens.push_back(modvec(r));
    impl->gen_names.push_back("e" + std::to_string(i));
  }
  return FiniteGroup(impl);
}

FiniteGroup cyclic(long long q) {
  if (q < 1) throw Error(ErrorKind::InvalidArgument, "cyclic order must be positive");
  return abelian({q});
}

FiniteGroup trivial_group() { return abelian({}); }

FiniteGroup symmetric(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "symmetric degree must be positive");
  auto impl = std::make_shared<FiniteGroup::Impl>();
  impl->kind = GroupKind::Symmetric;
  impl->n = n;
  impl->name = "S" + std::to_string(n);
  if (n >= 2) {
    Perm s = Perm::identity(n);
    std::swap(s.images[0], s.images[1]);
    impl->gens.push_back(s);
    impl->gen_names.push_back("(0 1)");
  }
  if (n >= 3) {
    impl->gens.push_back(Perm::cycle(n));
    impl->gen_names.push_back("cycle");
  }
  return FiniteGroup(impl);
}

FiniteGroup shift(int q) {
  if (q < 1) throw Error(ErrorKind::InvalidArgument, "shift order must be positive");
  auto impl = std::make_shared<FiniteGroup::Impl>();
  impl->kind = GroupKind::Shift;
  impl->n = q;
  impl->name = "Shift(" + std::to_string(q) + ")";
  if (q >= 2) {
    impl->gens.push_back(Perm::cycle(q));
    impl->gen_names.push_back("shift");
  }
  return FiniteGroup(impl);
}

FiniteGroup product(std::vector<FiniteGroup> factors) {
  auto impl = std::make_shared<FiniteGroup::Impl>();
  impl->kind = GroupKind::Product;
  std::string nm = "(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    nm += (i ? " x " : "") + factors[i].name();
    for (std::size_t s = 0; s < factors[i].generators().size(); ++s) {
      std::vector<GroupElement> parts;
      for (const auto& f : factors) parts.push_back(f.identity());
      parts[i] = factors[i].generators()[s];
      impl->gens.push_back(tuple(std::move(parts)));
      impl->gen_names.push_back(std::to_string(i) + "." + factors[i].generator_names()[s]);
    }
  }
  impl->name = nm + ")";
  std::size_t cap = kDefaultEnumerationCap;
  for (const auto& f : factors) cap = std::max(cap, f.enumeration_cap());
  impl->cap = cap;
  impl->factors = std::move(factors);
  return FiniteGroup(impl);
}

FiniteGroup wreath(const FiniteGroup& base, int blocks, const FiniteGroup& top) {
  if (blocks < 1) throw Error(ErrorKind::InvalidArgument, "wreath needs at least one block");
  if (!top.is_perm_group() || top.degree() != blocks || top.kind() == GroupKind::Wreath)
    throw Error(ErrorKind::StructureMismatch, "wreath top must be a permutation group on the blocks");
  auto impl = std::make_shared<FiniteGroup::Impl>();
  impl->kind = GroupKind::Wreath;
  impl->blocks = blocks;
  impl->name = "(" + base.name() + " wr" + std::to_string(blocks) + " " + top.name() + ")";
  impl->cap = std::max(base.enumeration_cap(), top.enumeration_cap());
  // base generators sit in the first slot of every top orbit (slot 0 when transitive)
  auto reps = distinct_reps(block_reps(top, blocks));
  for (int r : reps)
    for (std::size_t s = 0; s < base.generators().size(); ++s) {
      WreathTuple w;
      w.base.assign(blocks, base.identity());
      w.base[r] = base.generators()[s];
      w.top = Perm::identity(blocks);
      impl->gens.push_back(w);
      impl->gen_names.push_back((reps.size() > 1 ? "base" + std::to_string(r) + "." : std::string("base.")) +
                                base.generator_names()[s]);
    }
  for (std::size_t s = 0; s < top.generators().size(); ++s) {
    WreathTuple w;
    w.base.assign(blocks, base.identity());
    w.top = top.generators()[s].perm();
    impl->gens.push_back(w);
    impl->gen_names.push_back("top." + top.generator_names()[s]);
  }
  impl->factors = {base, top};
  return FiniteGroup(impl);
}

FiniteGroup iterated_wreath(int m, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "iterated wreath depth must be positive");
  FiniteGroup g = symmetric(m);
  for (int i = 2; i <= k; ++i) g = wreath(g, m, symmetric(m));
  return g;
}

FiniteGroup generated(const FiniteGroup& parent, std::vector<GroupElement> gens, std::string name) {
  auto impl = std::make_shared<FiniteGroup::Impl>();
  impl->kind = GroupKind::Generated;
  impl->factors = {parent};
  impl->cap = parent.enumeration_cap();
  for (const auto& g : gens)
    if (!parent.contains(g))
      throw Error(ErrorKind::NotInGroup, to_string(g) + " not in " + parent.name());
  // drop identities, keep order
  std::vector<GroupElement> kept;
  for (auto& g : gens)
    if (g != parent.identity()) kept.push_back(std::move(g));
  impl->gens = std::move(kept);
  for (std::size_t i = 0; i < impl->gens.size(); ++i) impl->gen_names.push_back("g" + std::to_string(i));
  impl->name = name.empty() ? "<" + std::to_string(impl->gens.size()) + " gens in " + parent.name() + ">"
                            : name;
  // closure
  std::vector<GroupElement> elems{parent.identity()};
  std::unordered_map<GroupElement, char, ElementHash> seen{{elems[0], 1}};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& s : impl->gens) {
      GroupElement h = parent.compose(s, elems[head]);
      if (seen.emplace(h, 1).second) {
        elems.push_back(std::move(h));
        if (elems.size() > impl->cap)
          throw Error(ErrorKind::CapExceeded, "generated subgroup exceeds cap");
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  impl->elements = std::move(elems);
  return FiniteGroup(impl);
}

GroupElement compose(const FiniteGroup& G, const GroupElement& a, const GroupElement& b) {
  return G.compose(a, b);
}
GroupElement inverse(const FiniteGroup& G, const GroupElement& a) { return G.inverse(a); }
std::vector<GroupElement> enumerate(const FiniteGroup& G) { return G.enumerate(); }

// ---- homomorphisms

namespace {

using HomTable = std::vector<std::pair<GroupElement, GroupElement>>;

GroupElement fold_images(const FiniteGroup& target, const std::vector<GroupElement>& images,
                         const Word& w) {
  GroupElement acc = target.identity();
  for (const auto& [s, k] : w) acc = target.compose(acc, target.power(images.at(s), k));
  return acc;
}

// ρ(s·g) = ρ(s)·ρ(g) for every element g and generator s is equivalent to ρ being a homomorphism
std::optional<std::string> exhaustive_failure(const FiniteGroup& source, const FiniteGroup& target,
                                              const std::vector<GroupElement>& images,
                                              HomTable* table_out) {
  auto ord = source.order();
  if (!ord || *ord > source.enumeration_cap())
    throw Error(ErrorKind::CapExceeded, source.name() + " order exceeds enumeration cap");
  // one BFS over the Cayley graph: the first edge into an element defines its image,
  // every later edge must agree
  const auto& gens = source.generators();
  std::vector<GroupElement> elems{source.identity()}, img{target.identity()};
  std::unordered_map<GroupElement, std::size_t, ElementHash> index{{elems[0], 0}};
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (std::size_t s = 0; s < gens.size(); ++s) {
      GroupElement h = source.compose(gens[s], elems[head]);
      GroupElement rh = target.compose(images[s], img[head]);
      auto it = index.find(h);
      if (it == index.end()) {
        index.emplace(h, elems.size());
        elems.push_back(std::move(h));
        img.push_back(std::move(rh));
      } else if (img[it->second] != rh) {
        return "rho(" + source.generator_names()[s] + " * " + to_string(elems[head]) + ") != rho(" +
               source.generator_names()[s] + ") * rho(" + to_string(elems[head]) + ")";
      }
    }
  }
  if (table_out) {
    table_out->clear();
    for (std::size_t i = 0; i < elems.size(); ++i) table_out->emplace_back(elems[i], img[i]);
    std::sort(table_out->begin(), table_out->end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return std::nullopt;
}

bool commute(const FiniteGroup& T, const GroupElement& a, const GroupElement& b) {
  return T.compose(a, b) == T.compose(b, a);
}

std::optional<std::string> relation_failure(const FiniteGroup& source, const FiniteGroup& target,
                                            const std::vector<GroupElement>& images) {
  auto ord = source.order();
  if (ord && *ord <= source.enumeration_cap())
    return exhaustive_failure(source, target, images, nullptr);
  const auto& names = source.generator_names();
  switch (source.kind()) {
    case GroupKind::Abelian: {
      std::size_t gi = 0;
      for (std::size_t i = 0; i < source.moduli().size(); ++i) {
        long long m = source.moduli()[i];
        if (m == 1) continue;
        if (m > 0 && target.power(images[gi], m) != target.identity())
          return names[gi] + "^" + std::to_string(m) + " does not map to e";
        ++gi;
      }
      for (std::size_t a = 0; a < images.size(); ++a)
        for (std::size_t b = a + 1; b < images.size(); ++b)
          if (!commute(target, images[a], images[b]))
            return names[a] + " and " + names[b] + " images do not commute";
      return std::nullopt;
    }
    case GroupKind::Shift:
      if (!images.empty() && target.power(images[0], source.n()) != target.identity())
        return "shift^" + std::to_string(source.n()) + " does not map to e";
      return std::nullopt;
    case GroupKind::Product: {
      std::size_t off = 0;
      std::vector<std::pair<std::size_t, std::size_t>> ranges;
      for (const auto& f : source.factors()) {
        std::size_t ng = f.generators().size();
        std::vector<GroupElement> sub(images.begin() + off, images.begin() + off + ng);
        if (auto fail = relation_failure(f, target, sub)) return "factor " + f.name() + ": " + *fail;
        ranges.emplace_back(off, off + ng);
        off += ng;
      }
      for (std::size_t x = 0; x < ranges.size(); ++x)
        for (std::size_t y = x + 1; y < ranges.size(); ++y)
          for (std::size_t a = ranges[x].first; a < ranges[x].second; ++a)
            for (std::size_t b = ranges[y].first; b < ranges[y].second; ++b)
              if (!commute(target, images[a], images[b]))
                return names[a] + " and " + names[b] + " images do not commute";
      return std::nullopt;
    }
    case GroupKind::Wreath: {
      const FiniteGroup& base = source.factors()[0];
      const FiniteGroup& top = source.factors()[1];
      if (distinct_reps(block_reps(top, source.blocks())).size() != 1)
        throw Error(ErrorKind::CapExceeded, source.name() + " has an intransitive top and no relation set");
      std::size_t nb = base.generators().size();
      std::vector<GroupElement> bimg(images.begin(), images.begin() + nb);
      std::vector<GroupElement> timg(images.begin() + nb, images.end());
      if (auto fail = relation_failure(base, target, bimg)) return "base: " + *fail;
      if (auto fail = relation_failure(top, target, timg)) return "top: " + *fail;
      for (const auto& [t, w] : top.enumerate_with_words()) {
        GroupElement rt = fold_images(target, timg, w);
        if (top.act(t, 0) == 0) {
          for (std::size_t a = 0; a < nb; ++a)
            if (!commute(target, bimg[a], rt))
              return names[a] + " image does not commute with a block-0 stabilizer image";
        } else {
          GroupElement rti = target.inverse(rt);
          for (std::size_t a = 0; a < nb; ++a)
            for (std::size_t b = 0; b < nb; ++b) {
              GroupElement conj = target.compose(rt, target.compose(bimg[b], rti));
              if (!commute(target, bimg[a], conj))
                return "slot-0 image of " + names[a] + " does not commute with a slot copy of " +
                       names[b];
            }
        }
      }
      return std::nullopt;
    }
    default:
      throw Error(ErrorKind::CapExceeded,
                  source.name() + " is above the enumeration cap and has no relation set");
  }
}

void check_images(const FiniteGroup& source, const FiniteGroup& target,
                  const std::vector<GroupElement>& images) {
  if (images.size() != source.generators().size())
    throw Error(ErrorKind::InvalidArgument, "need one image per source generator");
  for (const auto& g : images) {
    target.check(g);
    if (!target.contains(g)) throw Error(ErrorKind::NotInGroup, to_string(g) + " not in " + target.name());
  }
}

}  // namespace

std::optional<std::string> hom_failure(const FiniteGroup& source, const FiniteGroup& target,
                                       const std::vector<GroupElement>& images) {
  check_images(source, target, images);
  return relation_failure(source, target, images);
}

Homomorphism make_hom(const FiniteGroup& source, const FiniteGroup& target,
                      std::vector<GroupElement> images) {
  check_images(source, target, images);
  Homomorphism h;
  h.source_ = source;
  h.target_ = target;
  auto ord = source.order();
  if (ord && *ord <= source.enumeration_cap()) {
    auto table = std::make_shared<HomTable>();
    if (auto fail = exhaustive_failure(source, target, images, table.get()))
      throw Error(ErrorKind::NotAHomomorphism, *fail);
    h.table_ = table;
  } else if (auto fail = relation_failure(source, target, images)) {
    throw Error(ErrorKind::NotAHomomorphism, *fail);
  }
  h.images_ = std::move(images);
  h.validated_ = true;
  return h;
}

Homomorphism make_hom_unchecked(const FiniteGroup& source, const FiniteGroup& target,
                                std::vector<GroupElement> images) {
  check_images(source, target, images);
  Homomorphism h;
  h.source_ = source;
  h.target_ = target;
  h.images_ = std::move(images);
  return h;
}

Homomorphism identity_hom(const FiniteGroup& G) { return make_hom(G, G, G.generators()); }

Homomorphism compose_hom(const Homomorphism& outer, const Homomorphism& inner) {
  std::vector<GroupElement> imgs;
  for (const auto& g : inner.images()) imgs.push_back(outer.apply(g));
  if (outer.validated() && inner.validated()) return make_hom(inner.source(), outer.target(), imgs);
  return make_hom_unchecked(inner.source(), outer.target(), imgs);
}

GroupElement Homomorphism::apply(const GroupElement& g) const {
  if (!source_.contains(g)) throw Error(ErrorKind::NotInGroup, to_string(g) + " not in " + source_.name());
  if (table_) {
    auto it = std::lower_bound(table_->begin(), table_->end(), g,
                               [](const auto& e, const GroupElement& x) { return e.first < x; });
    if (it != table_->end() && it->first == g) return it->second;
    throw Error(ErrorKind::NotInGroup, to_string(g) + " missing from table");
  }
  return fold_images(target_, images_, source_.express(g));
}

GroupElement apply_hom(const Homomorphism& rho, const GroupElement& g) { return rho.apply(g); }

}  // namespace symsched
