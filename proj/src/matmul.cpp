#include "symsched/matmul.hpp"

#include <algorithm>
#include <numeric>

#include "symsched/error.hpp"

namespace symsched {

namespace {

long long md(long long a, long long q) { return ((a % q) + q) % q; }

constexpr long long kMaxInstructions = 1LL << 24;

int ilog2(long long x) {
  int r = 0;
  while ((1LL << r) < x) ++r;
  return r;
}

bool pow2(long long x) { return x > 0 && (x & (x - 1)) == 0; }

MachineSpec torus_spec(std::vector<int> dims, int memory) {
  MachineSpec s;
  s.kind = MachineKind::Torus;
  s.dims = std::move(dims);
  s.memory_words = memory;
  return s;
}

void fill_phases(ScheduleBundle& b, const char* phase) {
  b.phases.assign(b.placement_steps(), phase);
}

void init_placement(ScheduleBundle& b, int copies) {
  for (int s = 0; s < 3; ++s) {
    auto& p = b.placement[s];
    p.copies = copies;
    p.output = s == 2;
    p.steps.assign(b.placement_steps(), std::vector<int>(b.dims.set_size(s) * copies, -1));
    b.inp[s].assign(b.slots.size(), 0);
  }
}

using HomMaker = Homomorphism (*)(const FiniteGroup&, const FiniteGroup&, std::vector<GroupElement>);

std::vector<HomRecord> torus_homs(int q, const TorusHomParams& p, bool checked) {
  HomMaker mk = checked ? &make_hom : &make_hom_unchecked;
  FiniteGroup sh = shift(q);
  FiniteGroup G = product({sh, sh, sh});
  FiniteGroup NT = product({abelian({q, q}), cyclic(q)});
  auto nt = [q](long long x, long long y, long long t) {
    return tuple({modvec({md(x, q), md(y, q)}), modvec({md(t, q)})});
  };
  std::vector<HomRecord> out;
  std::vector<GroupElement> rho;
  if (q >= 2)
    for (int r = 0; r < 3; ++r) rho.push_back(nt(p.rows[r][0], p.rows[r][1], p.rows[r][2]));
  out.push_back({"rho", mk(G, NT, rho)});

  FiniteGroup HD = product({sh, sh, cyclic(q)});
  GroupElement cyc = Perm::cycle(q, 1), id = Perm::identity(q);
  for (int s = 0; s < 3; ++s) {
    auto roles = set_index_roles(s);
    std::vector<GroupElement> lo, dm;
    if (q >= 2) {
      for (int r = 0; r < 3; ++r)
        lo.push_back(tuple({r == roles[0] ? cyc : id, r == roles[1] ? cyc : id,
                            modvec({md(p.rows[r][2], q)})}));
      const auto& mu = p.mu[s];
      dm = {nt(mu.mu1[0], mu.mu1[1], 0), nt(mu.mu2[0], mu.mu2[1], 0), nt(mu.mut[0], mu.mut[1], 1)};
    }
    out.push_back({std::string("rho_l.") + set_name(s), mk(G, HD, lo)});
    out.push_back({std::string("rho_d.") + set_name(s), mk(HD, NT, dm)});
  }
  return out;
}

// Block-level Cannon-like schedule; bl = bm = bn = 1 with flat=true is the plain torus schedule.
ScheduleBundle torus_blocked(int l, int m, int n, int q, const TorusHomParams& p, int memory,
                             bool flat, bool checked) {
  ScheduleBundle b;
  b.dims = instance(l, m, n);
  const int bl = l / q, bm = m / q, bn = n / q;
  const int bext[3] = {bl, bm, bn};
  b.machine = torus_spec({q, q}, memory);
  b.time = flat ? time_model({q}) : time_model({q, bl * bm * bn});
  b.placement_depth = 1;
  fill_phases(b, "main");

  b.slots.reserve(b.dims.instruction_count());
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k) {
        int I = i / bl, J = j / bm, K = k / bn;
        int x = static_cast<int>(md(p.x0 + 1LL * I * p.rows[0][0] + 1LL * J * p.rows[1][0] + 1LL * K * p.rows[2][0], q));
        int y = static_cast<int>(md(p.y0 + 1LL * I * p.rows[0][1] + 1LL * J * p.rows[1][1] + 1LL * K * p.rows[2][1], q));
        int t = static_cast<int>(md(p.t0 + 1LL * I * p.rows[0][2] + 1LL * J * p.rows[1][2] + 1LL * K * p.rows[2][2], q));
        Slot s{i, j, k, x * q + y, {t}};
        if (!flat) s.time.push_back(((i % bl) * bm + j % bm) * bn + k % bn);
        b.slots.push_back(std::move(s));
      }
  init_placement(b, 1);

  for (int s = 0; s < 3; ++s) {
    auto roles = set_index_roles(s);
    const auto& mu = p.mu[s];
    for (int T = 0; T < q; ++T)
      for (int v = 0; v < b.dims.set_size(s); ++v) {
        auto ix = b.dims.var_indices(s, v);
        long long A = ix[0] / bext[roles[0]], B = ix[1] / bext[roles[1]];
        long long x = p.x0 + A * mu.mu1[0] + B * mu.mu2[0] + (T - p.t0) * 1LL * mu.mut[0];
        long long y = p.y0 + A * mu.mu1[1] + B * mu.mu2[1] + (T - p.t0) * 1LL * mu.mut[1];
        b.placement[s].steps[T][v] = static_cast<int>(md(x, q) * q + md(y, q));
      }
  }
  b.homs = torus_homs(q, p, checked);
  return b;
}

int det3_mod(const std::array<std::array<int, 3>, 3>& r, int q) {
  long long d = 1LL * r[0][0] * (1LL * r[1][1] * r[2][2] - 1LL * r[1][2] * r[2][1]) -
                1LL * r[0][1] * (1LL * r[1][0] * r[2][2] - 1LL * r[1][2] * r[2][0]) +
                1LL * r[0][2] * (1LL * r[1][0] * r[2][1] - 1LL * r[1][1] * r[2][0]);
  return static_cast<int>(md(d, q));
}

}  // namespace

const char* set_name(int s) {
  static const char* names[] = {"A", "B", "C"};
  if (s < 0 || s > 2) throw Error(ErrorKind::InvalidArgument, "set index out of range");
  return names[s];
}

int MatmulInstance::set_size(int s) const {
  switch (s) {
    case 0: return l * m;
    case 1: return m * n;
    case 2: return n * l;
  }
  throw Error(ErrorKind::InvalidArgument, "set index out of range");
}

int MatmulInstance::var_id(int s, int i, int j, int k) const {
  switch (s) {
    case 0: return i * m + j;
    case 1: return j * n + k;
    case 2: return k * l + i;
  }
  throw Error(ErrorKind::InvalidArgument, "set index out of range");
}

std::array<int, 2> MatmulInstance::var_indices(int s, int v) const {
  switch (s) {
    case 0: return {v / m, v % m};
    case 1: return {v / n, v % n};
    case 2: return {v / l, v % l};
  }
  throw Error(ErrorKind::InvalidArgument, "set index out of range");
}

std::string MatmulInstance::var_name(int s, int v) const {
  auto ix = var_indices(s, v);
  return std::string(set_name(s)) + "[" + std::to_string(ix[0]) + "," + std::to_string(ix[1]) + "]";
}

FiniteGroup MatmulInstance::symmetry_group() const {
  return product({symmetric(l), symmetric(m), symmetric(n)});
}

MatmulInstance instance(int l, int m, int n) {
  if (l < 1 || m < 1 || n < 1) throw Error(ErrorKind::InvalidArgument, "extents must be positive");
  if (1LL * l * m * n > kMaxInstructions) throw Error(ErrorKind::SizeCap, "instance too large");
  return MatmulInstance{l, m, n};
}

int ScheduleBundle::placement_steps() const {
  int s = 1;
  for (int d = 0; d < placement_depth && d < static_cast<int>(time.levels.size()); ++d) s *= time.levels[d];
  return s;
}

int ScheduleBundle::step_of(const std::vector<int>& t) const {
  if (t.size() != time.levels.size()) return -1;
  int s = 0;
  for (std::size_t d = 0; d < t.size(); ++d) {
    if (t[d] < 0 || t[d] >= time.levels[d]) return -1;
    if (static_cast<int>(d) < placement_depth) s = s * time.levels[d] + t[d];
  }
  return s;
}

const HomRecord* ScheduleBundle::find_hom(const std::string& name) const {
  for (const auto& h : homs)
    if (h.name == name) return &h;
  return nullptr;
}

std::array<int, 3> set_index_roles(int s) {
  switch (s) {
    case 0: return {0, 1, 2};
    case 1: return {1, 2, 0};
    case 2: return {2, 0, 1};
  }
  throw Error(ErrorKind::InvalidArgument, "set index out of range");
}

std::optional<std::string> torus_params_failure(int q, const TorusHomParams& p) {
  if (q < 1) return "q must be positive";
  static const char* idx = "ijk";
  for (int s = 0; s < 3; ++s) {
    auto roles = set_index_roles(s);
    const auto& mu = p.mu[s];
    const auto& ra = p.rows[roles[0]];
    const auto& rb = p.rows[roles[1]];
    const auto& rm = p.rows[roles[2]];
    std::string tag = std::string("set ") + set_name(s) + ": ";
    for (int c = 0; c < 2; ++c) {
      const char* ax = c == 0 ? "x" : "y";
      if (md(mu.mu1[c] - ra[c] + 1LL * ra[2] * mu.mut[c], q) != 0)
        return tag + "mu1" + ax + " - " + ax + "_" + idx[roles[0]] + " != -t_" + idx[roles[0]] + "*mu_t" + ax;
      if (md(mu.mu2[c] - rb[c] + 1LL * rb[2] * mu.mut[c], q) != 0)
        return tag + "mu2" + ax + " - " + ax + "_" + idx[roles[1]] + " != -t_" + idx[roles[1]] + "*mu_t" + ax;
      if (md(rm[c] - 1LL * rm[2] * mu.mut[c], q) != 0)
        return tag + ax + "_" + idx[roles[2]] + " != t_" + idx[roles[2]] + "*mu_t" + ax;
    }
    long long d = 1LL * mu.mu1[0] * mu.mu2[1] - 1LL * mu.mu1[1] * mu.mu2[0];
    if (std::gcd(md(d, q), static_cast<long long>(q)) != 1)
      return tag + "mu1, mu2 do not span the torus";
  }
  if (std::gcd(det3_mod(p.rows, q), q) != 1) return "image of rho is smaller than q^2*q";
  return std::nullopt;
}

TorusHomParams cannon_params() {
  TorusHomParams p;
  p.rows = {{{1, 0, -1}, {0, 0, 1}, {0, 1, -1}}};
  p.mu[0] = {{1, -1}, {0, 1}, {0, -1}};
  p.mu[1] = {{1, 0}, {-1, 1}, {-1, 0}};
  p.mu[2] = {{0, 1}, {1, 0}, {0, 0}};
  return p;
}

bool is_prime(long long q) {
  if (q < 2) return false;
  for (long long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

bool is_primitive(const Perm& p) {
  int n = p.degree();
  if (n == 0) return false;
  int x = 0, len = 0;
  do {
    x = p.images[x];
    ++len;
  } while (x != 0 && len <= n);
  return len == n;
}

std::vector<CyclicHom> enumerate_homs_to_cyclic(const FiniteGroup& G, int q, int t) {
  if (!is_prime(q)) throw Error(ErrorKind::NotPrime, std::to_string(q) + " is not prime");
  if (t < 1) throw Error(ErrorKind::InvalidArgument, "t must be positive");
  if (!G.is_perm_group() || G.degree() != q)
    throw Error(ErrorKind::StructureMismatch, "need a subgroup of S_" + std::to_string(q));
  if (t % q != 0) return {};
  auto ord = G.order();
  if (!ord || *ord != static_cast<std::uint64_t>(q)) return {};
  // order q and prime: cyclic, generated by any nonidentity element, which is then a q-cycle
  std::optional<GroupElement> sigma;
  for (const auto& g : G.enumerate())
    if (is_primitive(G.as_perm(g))) {
      sigma = g;
      break;
    }
  if (!sigma) return {};
  // exponent of each generator in terms of sigma
  std::vector<long long> expo;
  for (const auto& g : G.generators()) {
    long long e = 0;
    GroupElement acc = G.identity();
    while (acc != g) {
      acc = G.compose(*sigma, acc);
      ++e;
    }
    expo.push_back(e);
  }
  FiniteGroup Z = cyclic(t);
  std::vector<CyclicHom> out;
  long long step = t / q;
  for (long long v = 1; v < q; ++v) {
    std::vector<GroupElement> imgs;
    for (long long e : expo) imgs.push_back(modvec({md(e * v * step, t)}));
    out.push_back(CyclicHom{*sigma, v * step, make_hom(G, Z, imgs)});
  }
  return out;
}

ScheduleBundle torus_schedule(int q, const TorusHomParams& params, bool checked) {
  if (q < 1) throw Error(ErrorKind::InvalidArgument, "q must be positive");
  if (checked)
    if (auto f = torus_params_failure(q, params)) throw Error(ErrorKind::ConditionViolated, *f);
  ScheduleBundle b = torus_blocked(q, q, q, q, params, 3, true, checked);
  b.preset = "torus";
  return b;
}

ScheduleBundle cannon(int q) {
  ScheduleBundle b = torus_schedule(q, cannon_params());
  b.preset = "cannon";
  return b;
}

ScheduleBundle cannon_blocked(int l, int m, int n, int q, std::optional<int> memory_budget) {
  if (q < 1) throw Error(ErrorKind::InvalidArgument, "q must be positive");
  if (l % q || m % q || n % q)
    throw Error(ErrorKind::Divisibility, "q=" + std::to_string(q) + " must divide l, m and n");
  int bl = l / q, bm = m / q, bn = n / q;
  int need = bl * bm + bm * bn + bn * bl;
  if (memory_budget && *memory_budget < need)
    throw Error(ErrorKind::MemoryBudget, "blocks need " + std::to_string(need) + " words per node, budget " +
                                             std::to_string(*memory_budget));
  ScheduleBundle b = torus_blocked(l, m, n, q, cannon_params(), memory_budget.value_or(need), false, true);
  b.preset = "cannon-blocked";
  return b;
}

ScheduleBundle schedule_2_5d(int n, int p, int c) {
  auto infeasible = [](const std::string& why) { throw Error(ErrorKind::ParameterInfeasible, why); };
  if (n < 1 || p < 1 || c < 1) infeasible("n, p and c must be positive");
  if (p % c) infeasible("c must divide p");
  int q = 0;
  while ((q + 1) * (q + 1) <= p / c) ++q;
  if (q * q != p / c) infeasible("q = sqrt(p/c) is not an integer");
  if (q % c) infeasible("t = q/c is not an integer");
  int t = q / c;
  if (n % q) infeasible("n is not divisible by c*t = " + std::to_string(q));
  const int bs = n / q;

  ScheduleBundle b;
  b.preset = "2.5d";
  b.dims = instance(n, n, n);
  b.machine = torus_spec({q, q, c}, 3 * bs * bs);
  const int P = c - 1, E = c - 1, S = P + t + E;
  b.time = time_model({S, bs * bs * bs});
  b.placement_depth = 1;
  b.phases.assign(S, "main");
  for (int g = 0; g < P; ++g) b.phases[g] = "prologue";
  for (int g = P + t; g < S; ++g) b.phases[g] = "epilogue";

  auto node = [&](long long x, long long y, int z) {
    return static_cast<int>((md(x, q) * q + md(y, q)) * c + z);
  };
  std::vector<int> layer_of;
  layer_of.reserve(b.dims.instruction_count());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        int I = i / bs, J = j / bs, K = k / bs;
        int u = static_cast<int>(md(J - I - K, q));
        int z = u / t, s = u % t;
        int inner = ((i % bs) * bs + j % bs) * bs + k % bs;
        b.slots.push_back(Slot{i, j, k, node(I, K, z), {P + s, inner}});
        layer_of.push_back(z);
      }
  init_placement(b, c);
  for (int s = 0; s < 3; ++s)
    for (std::size_t x = 0; x < b.slots.size(); ++x) b.inp[s][x] = layer_of[x];

  for (int g = 0; g < S; ++g) {
    for (int v = 0; v < n * n; ++v) {
      auto ix = b.dims.var_indices(0, v);  // same shape for all three sets
      int R = ix[0] / bs, Q = ix[1] / bs;
      for (int z = 0; z < c; ++z) {
        int sA = -1;  // main step whose position the copy holds
        if (g < P) {
          if (z <= g) sA = 0;
        } else if (g < P + t) {
          sA = g - P;
        }
        if (sA >= 0) {
          // A[R,Q] = A_{IJ}; B[R,Q] = B_{JK}
          b.placement[0].steps[g][v * c + z] = node(R, Q - R - 1LL * z * t - sA, z);
          b.placement[1].steps[g][v * c + z] = node(R - Q - 1LL * z * t - sA, Q, z);
        }
        // C[R,Q] = C_{KI} lives at (I, K, z) = (Q, R, z)
        bool alive = g < P + t || z < c - (g - (P + t) + 1);
        if (alive) b.placement[2].steps[g][v * c + z] = node(Q, R, z);
      }
    }
  }

  // block-level translations (I,J,K) -> (I+1,J+1,K) and (I,J+1,K+1)
  FiniteGroup G = abelian({q, q});
  FiniteGroup NT = product({abelian({q, q, c}), cyclic(q)});
  FiniteGroup HD = product({abelian({q, q}), cyclic(q)});
  auto nt = [&](long long x, long long y, long long dt) {
    return tuple({modvec({md(x, q), md(y, q), 0}), modvec({md(dt, q)})});
  };
  auto hd = [&](long long a, long long bb) { return tuple({modvec({md(a, q), md(bb, q)}), modvec({0})}); };
  std::vector<GroupElement> rho, lo[3], dm[3];
  if (q >= 2) {
    rho = {nt(1, 0, 0), nt(0, 1, 0)};
    lo[0] = {hd(1, 1), hd(0, 1)};
    dm[0] = {nt(1, -1, 0), nt(0, 1, 0), nt(0, -1, 1)};
    lo[1] = {hd(1, 0), hd(1, 1)};
    dm[1] = {nt(1, 0, 0), nt(-1, 1, 0), nt(-1, 0, 1)};
    lo[2] = {hd(0, 1), hd(1, 0)};
    dm[2] = {nt(0, 1, 0), nt(1, 0, 0), nt(0, 0, 1)};
  }
  b.homs.push_back({"rho", make_hom(G, NT, rho)});
  for (int s = 0; s < 3; ++s) {
    b.homs.push_back({std::string("rho_l.") + set_name(s), make_hom(G, HD, lo[s])});
    b.homs.push_back({std::string("rho_d.") + set_name(s), make_hom(HD, NT, dm[s])});
  }
  return b;
}

ScheduleBundle fat_tree_recursive(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be at least 1");
  if (d > 4) throw Error(ErrorKind::SizeCap, "fat-tree recursion limited to d <= 4");
  const int n = 1 << d, L = 2 * d;
  ScheduleBundle b;
  b.preset = "fat-tree";
  b.dims = instance(n, n, n);
  b.machine.kind = MachineKind::FatTree;
  b.machine.levels = L;
  b.machine.memory_words = 3;
  b.time = time_model(std::vector<int>(d, 2));
  b.placement_depth = d;

  auto leaf = [d](int i, int k) {
    int x = 0;
    for (int l = 0; l < d; ++l) x |= (((i >> l) & 1) << (2 * l)) | (((k >> l) & 1) << (2 * l + 1));
    return x;
  };
  auto tvec = [d](int T) {
    std::vector<int> v(d);
    for (int l = 0; l < d; ++l) v[d - 1 - l] = (T >> l) & 1;
    return v;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) b.slots.push_back(Slot{i, j, k, leaf(i, k), tvec(i ^ j ^ k)});
  fill_phases(b, "main");
  init_placement(b, 1);
  for (int T = 0; T < n; ++T)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int v = x * n + y;
        b.placement[0].steps[T][v] = leaf(x, T ^ x ^ y);  // A_ij, k = T^i^j
        b.placement[1].steps[T][v] = leaf(T ^ x ^ y, y);  // B_jk, i = T^j^k
        b.placement[2].steps[T][v] = leaf(y, x);          // C_ki
      }

  FiniteGroup N = iterated_wreath(2, L);
  FiniteGroup D = abelian(std::vector<long long>(d, 2));
  FiniteGroup NT = product({N, D});
  const int leaves = 1 << L;
  auto flip = [&](int mask) {
    Perm p;
    p.images.resize(leaves);
    for (int x = 0; x < leaves; ++x) p.images[x] = x ^ mask;
    return *N.from_perm(p);
  };
  auto tbit = [d](int l) {
    std::vector<long long> r(d, 0);
    if (l >= 0) r[d - 1 - l] = 1;
    return modvec(r);
  };
  auto nt = [&](int mask, int l) { return tuple({flip(mask), tbit(l)}); };

  FiniteGroup S2 = symmetric(2);
  FiniteGroup G = product(std::vector<FiniteGroup>(3 * d, S2));
  std::vector<GroupElement> rho;
  for (int r = 0; r < 3; ++r)
    for (int l = 0; l < d; ++l) {
      int mask = r == 0 ? 1 << (2 * l) : r == 2 ? 1 << (2 * l + 1) : 0;
      rho.push_back(nt(mask, l));
    }
  b.homs.push_back({"rho", make_hom(G, NT, rho)});

  FiniteGroup HS = product(std::vector<FiniteGroup>(2 * d, S2));
  FiniteGroup HD = product({HS, D});
  GroupElement sw = Perm{{1, 0}}, id = Perm::identity(2);
  auto hs = [&](int pos, int l) {
    std::vector<GroupElement> parts(2 * d, id);
    if (pos >= 0) parts[pos] = sw;
    return tuple({tuple(parts), tbit(l)});
  };
  for (int s = 0; s < 3; ++s) {
    auto roles = set_index_roles(s);
    std::vector<GroupElement> lo, dm;
    for (int r = 0; r < 3; ++r)
      for (int l = 0; l < d; ++l) {
        int pos = r == roles[0] ? l : r == roles[1] ? d + l : -1;
        lo.push_back(hs(pos, l));
      }
    // images of (first index bits, second index bits, time coordinates); coordinate c is level d-1-c
    for (int part = 0; part < 3; ++part)
      for (int c = 0; c < d; ++c) {
        int l = part == 2 ? d - 1 - c : c;
        int lo_bit = 1 << (2 * l), hi_bit = 1 << (2 * l + 1), mask = 0, tb = -1;
        if (s == 0) mask = part == 0 ? lo_bit | hi_bit : hi_bit;
        if (s == 1) mask = part == 1 ? lo_bit | hi_bit : lo_bit;
        if (s == 2) mask = part == 0 ? hi_bit : part == 1 ? lo_bit : 0;
        if (part == 2) tb = l;
        dm.push_back(nt(mask, tb));
      }
    b.homs.push_back({std::string("rho_l.") + set_name(s), make_hom(G, HD, lo)});
    b.homs.push_back({std::string("rho_d.") + set_name(s), make_hom(HD, NT, dm)});
  }
  return b;
}

Homomorphism fat_tree_alt_table() {
  FiniteGroup S2 = symmetric(2);
  FiniteGroup G = product({S2, S2, S2});
  FiniteGroup N = iterated_wreath(2, 2);
  FiniteGroup NT = product({N, cyclic(2)});
  auto el = [&](std::vector<int> p, long long t) { return tuple({*N.from_perm(Perm{std::move(p)}), modvec({t})}); };
  // σ00σ01 swaps inside both halves, σ10 swaps the halves
  return make_hom(G, NT, {el({1, 0, 3, 2}, 0), el({3, 2, 1, 0}, 1), el({2, 3, 0, 1}, 0)});
}

ScheduleBundle pmh_space_bounded(const std::vector<PmhLevel>& levels) {
  auto infeasible = [](const std::string& why) { throw Error(ErrorKind::ParameterInfeasible, why); };
  if (levels.empty()) throw Error(ErrorKind::InvalidHierarchy, "no levels");
  const int h = static_cast<int>(levels.size());
  std::vector<int> dexp(h + 1, 0), cexp(h + 1, 0), e(h + 1, 0), a(h + 1, 1), w(h + 1, 0);
  for (int i = 1; i <= h; ++i) {
    const auto& lv = levels[i - 1];
    if (lv.M % 3 || !pow2(lv.M / 3) || !pow2(lv.f))
      throw Error(ErrorKind::InvalidHierarchy, "level " + std::to_string(i) + " is not (3*2^d, 2^c)");
    dexp[i] = ilog2(lv.M / 3);
    cexp[i] = ilog2(lv.f);
    std::string tag = "level " + std::to_string(i) + ": ";
    if (dexp[i] % 2) infeasible(tag + "d is odd, cache blocks are not square");
    if (cexp[i] % 3) infeasible(tag + "c is not a multiple of 3");
    if (dexp[i] <= dexp[i - 1]) infeasible(tag + "cache does not grow");
    e[i] = (dexp[i] - dexp[i - 1]) / 2;
    if (3 * e[i] < 2 * cexp[i]) infeasible(tag + "too many processors for the block split");
    a[i] = 1 << (cexp[i] / 3);
    w[i] = 3 * e[i] - cexp[i];
  }
  MachineSpec spec;
  spec.kind = MachineKind::Pmh;
  spec.pmh = levels;
  spec.memory_words = 3;
  MachineModel machine(spec);  // validates nesting and fan-out

  const int n = 1 << (dexp[h] / 2);
  int bits = 0;
  for (int i = 1; i <= h; ++i) bits += w[i];
  if (bits > 22) throw Error(ErrorKind::SizeCap, "too many time steps");

  ScheduleBundle b;
  b.preset = "pmh";
  b.dims = instance(n, n, n);
  b.machine = spec;
  b.time = time_model(bits ? std::vector<int>(bits, 2) : std::vector<int>{1});
  b.placement_depth = static_cast<int>(b.time.levels.size());
  fill_phases(b, "main");
  std::vector<long long> child_nodes(h + 1, 1);  // nodes in one level-(i-1) cache
  for (int i = 2; i <= h; ++i) child_nodes[i] = levels[i - 2].M / 3;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        long long node = 0, step = 0;
        for (int lv = h; lv >= 1; --lv) {
          int sh = dexp[lv - 1] / 2, mask = (1 << e[lv]) - 1;
          int Ii = (i >> sh) & mask, Ji = (j >> sh) & mask, Ki = (k >> sh) & mask;
          int A = a[lv], A2 = A * A;
          int x = (Ii % A2) / A, y = (Ji % A2) / A, z = (Ki % A2) / A;
          int o1 = static_cast<int>(md(Ii % A - y, A)), o2 = static_cast<int>(md(Ji % A - z, A)),
              o3 = static_cast<int>(md(Ki % A - x, A));
          int Ih = Ii / A2, Jh = Ji / A2, Kh = Ki / A2;
          long long mort = 0;
          for (int bit = e[lv] - 2 * (cexp[lv] / 3) - 1; bit >= 0; --bit)
            mort = (mort << 3) | (((Ih >> bit) & 1) << 2) | (((Jh >> bit) & 1) << 1) | ((Kh >> bit) & 1);
          long long local = (mort * A * A * A) + (1LL * o1 * A + o2) * A + o3;
          step = (step << w[lv]) | local;
          node += 1LL * ((x * A + y) * A + z) * child_nodes[lv];
        }
        std::vector<int> tv(b.time.levels.size(), 0);
        for (int bit = 0; bit < bits; ++bit) tv[bits - 1 - bit] = static_cast<int>((step >> bit) & 1);
        b.slots.push_back(Slot{i, j, k, static_cast<int>(node), std::move(tv)});
      }
  init_placement(b, 1);

  // single copies, swapped into place top-down before each step
  const int S = b.placement_steps(), V = n * n;
  std::vector<std::vector<int>> at_step(S);
  for (std::size_t x = 0; x < b.slots.size(); ++x) at_step[b.step_of(b.slots[x].time)].push_back(static_cast<int>(x));
  for (int s = 0; s < 3; ++s) {
    std::vector<int> pos(V), occ(V);
    std::iota(pos.begin(), pos.end(), 0);
    std::iota(occ.begin(), occ.end(), 0);
    auto swap_nodes = [&](int u, int v) {
      std::swap(occ[u], occ[v]);
      pos[occ[u]] = u;
      pos[occ[v]] = v;
    };
    auto var_of = [&](const Slot& sl) { return b.dims.var_id(s, sl.i, sl.j, sl.k); };
    for (int g = 0; g < S; ++g) {
      for (int lv = h; lv >= 2; --lv) {
        const long long cn = child_nodes[lv];
        const int side_bits = dexp[lv - 1] / 2;
        // required block per active child cache
        std::vector<std::pair<int, std::vector<int>>> need;
        std::vector<char> seen_cache(V / cn, 0);
        for (int x : at_step[g]) {
          int cache = static_cast<int>(b.slots[x].node / cn);
          if (seen_cache[cache]) continue;
          seen_cache[cache] = 1;
          auto ix = b.dims.var_indices(s, var_of(b.slots[x]));
          int r0 = (ix[0] >> side_bits) << side_bits, r1 = (ix[1] >> side_bits) << side_bits;
          std::vector<int> blk;
          for (int p = 0; p < (1 << side_bits); ++p)
            for (int q = 0; q < (1 << side_bits); ++q) blk.push_back((r0 + p) * n + r1 + q);
          need.emplace_back(cache, std::move(blk));
        }
        for (auto& [cache, blk] : need) {
          std::vector<char> want(V, 0);
          for (int v : blk) want[v] = 1;
          std::vector<int> outside, spare;
          for (int v : blk)
            if (pos[v] / cn != cache) outside.push_back(pos[v]);
          for (long long u = cache * cn; u < (cache + 1) * cn; ++u)
            if (!want[occ[u]]) spare.push_back(static_cast<int>(u));
          std::sort(outside.begin(), outside.end());
          for (std::size_t z = 0; z < outside.size(); ++z) swap_nodes(outside[z], spare[z]);
        }
      }
      for (int x : at_step[g]) {
        int v = var_of(b.slots[x]);
        if (pos[v] != b.slots[x].node) swap_nodes(pos[v], b.slots[x].node);
      }
      b.placement[s].steps[g] = pos;
    }
  }

  // sequential case: index bit flips land on distinct time bits in Z-order
  bool sequential = true;
  for (int i = 1; i <= h; ++i) sequential = sequential && cexp[i] == 0;
  if (sequential && bits > 0) {
    const int nb = dexp[h] / 2;
    FiniteGroup S2 = symmetric(2);
    FiniteGroup G = product(std::vector<FiniteGroup>(3 * nb, S2));
    const FiniteGroup& N = machine.network_group();
    FiniteGroup NT = product({N, abelian(std::vector<long long>(bits, 2))});
    std::vector<GroupElement> rho;
    for (int r = 0; r < 3; ++r)
      for (int l = 0; l < nb; ++l) {
        std::vector<long long> tv(bits, 0);
        tv[3 * (nb - 1 - l) + r] = 1;
        rho.push_back(tuple({N.identity(), modvec(tv)}));
      }
    b.homs.push_back({"rho", make_hom(G, NT, rho)});
  }
  return b;
}

ScheduleBundle hex_systolic(int q, int window, std::optional<std::array<int, 2>> anchor) {
  if (q < 1) throw Error(ErrorKind::InvalidArgument, "q must be positive");
  const int W = window ? window : 3 * q;
  const std::array<int, 2> an = anchor.value_or(std::array<int, 2>{W / 2, W / 2});
  // lattice point of X_ijk = anchor + i*g2 - j*g1 + k*g3
  auto lat = [&](int i, int j, int k) { return std::array<int, 2>{an[0] + i - j, an[1] - j + k}; };
  for (int i : {0, q - 1})
    for (int j : {0, q - 1})
      for (int k : {0, q - 1}) {
        auto p = lat(i, j, k);
        if (p[0] < 0 || p[1] < 0 || p[0] >= W || p[1] >= W)
          throw Error(ErrorKind::WindowOverflow, "schedule leaves the " + std::to_string(W) + "-wide window");
      }
  ScheduleBundle b;
  b.preset = "hex";
  b.dims = instance(q, q, q);
  b.machine.kind = MachineKind::Hex;
  b.machine.window = W;
  b.machine.memory_words = 3;
  b.time = time_model({3 * q});
  b.placement_depth = 1;
  fill_phases(b, "main");
  auto node = [&](std::array<int, 2> p) { return p[0] * W + p[1]; };
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int k = 0; k < q; ++k) b.slots.push_back(Slot{i, j, k, node(lat(i, j, k)), {i + j + k}});
  init_placement(b, 1);
  // each variable is present only while it is used; streams follow the missing index
  for (int T = 0; T < 3 * q; ++T)
    for (int x = 0; x < q; ++x)
      for (int y = 0; y < q; ++y) {
        int v = x * q + y;
        int k = T - x - y;  // A_ij
        if (k >= 0 && k < q) b.placement[0].steps[T][v] = node(lat(x, y, k));
        int i = T - x - y;  // B_jk
        if (i >= 0 && i < q) b.placement[1].steps[T][v] = node(lat(i, x, y));
        int j = T - x - y;  // C_ki
        if (j >= 0 && j < q) b.placement[2].steps[T][v] = node(lat(y, j, x));
      }

  // ℤ² has no element of order q, so these are recorded without validation
  FiniteGroup sh = shift(q);
  FiniteGroup G = product({sh, sh, sh});
  FiniteGroup NT = product({abelian({0, 0}), cyclic(3 * q)});
  FiniteGroup HD = product({sh, sh, cyclic(3 * q)});
  auto nt = [&](long long u, long long v, long long dt) { return tuple({modvec({u, v}), modvec({md(dt, 3 * q)})}); };
  GroupElement cyc = Perm::cycle(q, 1), id = Perm::identity(q);
  // images of σ_i, σ_j, σ_k: g2, -g1, g3
  const long long img[3][2] = {{1, 0}, {-1, -1}, {0, 1}};
  std::vector<GroupElement> rho;
  if (q >= 2)
    for (auto& r : img) rho.push_back(nt(r[0], r[1], 1));
  b.homs.push_back({"rho", make_hom_unchecked(G, NT, rho)});
  for (int s = 0; s < 3; ++s) {
    auto roles = set_index_roles(s);
    std::vector<GroupElement> lo, dm;
    const long long* mt = img[roles[2]];
    if (q >= 2) {
      for (int r = 0; r < 3; ++r)
        lo.push_back(tuple({r == roles[0] ? cyc : id, r == roles[1] ? cyc : id, modvec({1})}));
      for (int part = 0; part < 2; ++part) {
        const long long* g = img[roles[part]];
        dm.push_back(nt(g[0] - mt[0], g[1] - mt[1], 0));
      }
    }
    dm.push_back(nt(mt[0], mt[1], 1));  // Z/3q keeps its generator even at q = 1
    b.homs.push_back({std::string("rho_l.") + set_name(s), make_hom_unchecked(G, HD, lo)});
    b.homs.push_back({std::string("rho_d.") + set_name(s), make_hom_unchecked(HD, NT, dm)});
  }
  return b;
}

}  // namespace symsched
