#include "fsm/fock_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fsm/errors.hpp"

namespace fsm {

namespace {

constexpr int kMaxRank = 10;

void require_rank(int n) {
  if (n < 0 || n > kMaxRank) throw DomainError("tensor rank outside supported range");
}

// Calls f(flat, digits) for every multi-index of a rank-n tensor. Parallel over
// the leading digit; each flat index is visited exactly once.
template <class F>
void for_each_index(int N, int n, F&& f) {
  if (n == 0) {
    int d0 = 0;
    f(std::size_t{0}, &d0);
    return;
  }
  const std::size_t inner = ipow(N, n - 1);
#pragma omp parallel for schedule(static)
  for (int lead = 0; lead < N; ++lead) {
    int d[kMaxRank] = {};
    d[0] = lead;
    std::size_t o = static_cast<std::size_t>(lead) * inner;
    for (std::size_t c = 0; c < inner; ++c, ++o) {
      f(o, d);
      for (int k = n - 1; k >= 1; --k) {
        if (++d[k] < N) break;
        d[k] = 0;
      }
    }
  }
}

template <class F>
void for_each_index_serial(int N, int n, F&& f) {
  const std::size_t total = ipow(N, n);
  int d[kMaxRank] = {};
  for (std::size_t o = 0; o < total; ++o) {
    f(o, d);
    for (int k = n - 1; k >= 0; --k) {
      if (++d[k] < N) break;
      d[k] = 0;
    }
  }
}

std::vector<std::pair<int, int>> inversions(const Perm& p) {
  std::vector<std::pair<int, int>> inv;
  const int n = static_cast<int>(p.size());
  for (int l = 0; l < n; ++l)
    for (int k = l + 1; k < n; ++k)
      if (p[l] > p[k]) inv.emplace_back(p[l], p[k]);
  return inv;
}

void check_perm(const Perm& p) {
  std::vector<int> s = p;
  std::sort(s.begin(), s.end());
  for (int i = 0; i < static_cast<int>(s.size()); ++i)
    if (s[i] != i) throw DomainError("not a permutation");
}

void check_same_grid(const FockSpace& fs, const RapidityGrid& g) {
  if (&fs.grid() != &g && (fs.grid().count != g.count || fs.grid().half_width != g.half_width))
    throw DomainError("grid mismatch");
}

void check_wave(const FockSpace& fs, const WaveFunction1& psi) {
  if (static_cast<int>(psi.values.size()) != fs.nodes()) throw DomainError("wave function size mismatch");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

RapidityGrid RapidityGrid::make(double half_width, int count) {
  if (!(half_width > 0.0)) throw DomainError("grid half width must be positive");
  if (count < 3 || count % 2 == 0) throw DomainError("grid node count must be odd and at least 3");
  RapidityGrid g;
  g.half_width = half_width;
  g.count = count;
  g.spacing = 2.0 * half_width / (count - 1);
  g.nodes.resize(count);
  g.weights.assign(count, g.spacing);
  const int mid = count / 2;
  for (int i = 0; i < count; ++i) g.nodes[i] = (i - mid) * g.spacing;
  g.weights.front() *= 0.5;
  g.weights.back() *= 0.5;
  return g;
}

GridPtr make_grid(double half_width, int count) {
  return std::make_shared<const RapidityGrid>(RapidityGrid::make(half_width, count));
}

double WaveFunction1::norm() const {
  double s = 0.0;
  for (int i = 0; i < grid->count; ++i) s += grid->weights[i] * std::norm(values[i]);
  return std::sqrt(s);
}

FockVector::FockVector(GridPtr grid, int n_max) : grid_(std::move(grid)) {
  if (n_max < 0) throw DomainError("negative truncation");
  require_rank(n_max);
  comp_.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    comp_[n].rank = n;
    comp_[n].data.assign(ipow(grid_->count, n), cplx(0.0));
  }
}

FockVector FockVector::vacuum(GridPtr grid, int n_max) {
  FockVector v(std::move(grid), n_max);
  v.comp_[0].data[0] = 1.0;
  return v;
}

FockVector FockVector::one_particle(const WaveFunction1& psi) {
  FockVector v(psi.grid, 1);
  v.comp_[1].data = psi.values;
  return v;
}

FockVector FockVector::resized(int n_max) const {
  FockVector v(grid_, n_max);
  for (int n = 0; n <= std::min(n_max, this->n_max()); ++n) v.comp_[n] = comp_[n];
  return v;
}

FockVector& FockVector::operator+=(const FockVector& o) {
  if (o.n_max() > n_max()) *this = resized(o.n_max());
  for (int n = 0; n <= o.n_max(); ++n) {
    auto& a = comp_[n].data;
    const auto& b = o.comp_[n].data;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  }
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& o) {
  if (o.n_max() > n_max()) *this = resized(o.n_max());
  for (int n = 0; n <= o.n_max(); ++n) {
    auto& a = comp_[n].data;
    const auto& b = o.comp_[n].data;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  }
  return *this;
}

FockVector& FockVector::operator*=(cplx c) {
  for (auto& t : comp_)
    for (auto& x : t.data) x *= c;
  return *this;
}

FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
FockVector operator*(cplx c, FockVector a) { return a *= c; }

cplx inner(const Tensor& a, const Tensor& b, const RapidityGrid& g) {
  if (a.rank != b.rank || a.data.size() != b.data.size()) throw DomainError("rank mismatch in inner product");
  cplx s = 0.0;
  for_each_index_serial(g.count, a.rank, [&](std::size_t o, const int* d) {
    double w = 1.0;
    for (int k = 0; k < a.rank; ++k) w *= g.weights[d[k]];
    s += w * std::conj(a.data[o]) * b.data[o];
  });
  return s;
}

double norm(const Tensor& a, const RapidityGrid& g) { return std::sqrt(std::max(0.0, inner(a, a, g).real())); }

cplx inner(const FockVector& a, const FockVector& b) {
  cplx s = 0.0;
  for (int n = 0; n <= std::min(a.n_max(), b.n_max()); ++n) s += inner(a.component(n), b.component(n), a.grid());
  return s;
}

double norm(const FockVector& a) { return std::sqrt(std::max(0.0, inner(a, a).real())); }

double number_norm(const FockVector& a, int shift) {
  double s = 0.0;
  for (int n = 0; n <= a.n_max(); ++n) {
    const double nn = norm(a.component(n), a.grid());
    s += (n + shift) * nn * nn;
  }
  return std::sqrt(s);
}

FockSpace::FockSpace(ScatteringFunction S, GridPtr grid, int cap) : S_(std::move(S)), grid_(std::move(grid)), cap_(cap) {
  if (!grid_) throw DomainError("null grid");
  if (cap_ < 0 || cap_ > kMaxRank - 2) throw DomainError("particle cap outside supported range");
  const int N = grid_->count;
  table_.resize(static_cast<std::size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) table_[static_cast<std::size_t>(i) * N + j] = S_(grid_->nodes[i] - grid_->nodes[j]);
}

Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm compose(const Perm& p, const Perm& q) {
  if (p.size() != q.size()) throw DomainError("permutation size mismatch");
  Perm r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) r[k] = p[q[k]];
  return r;
}

Perm inverse(const Perm& p) {
  Perm r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) r[p[k]] = static_cast<int>(k);
  return r;
}

Perm transposition(int n, int k) {
  if (k < 0 || k + 1 >= n) throw DomainError("transposition index out of range");
  Perm p = identity_perm(n);
  std::swap(p[k], p[k + 1]);
  return p;
}

std::vector<Perm> all_perms(int n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Tensor apply_dn(const FockSpace& fs, const Perm& perm, const Tensor& t) {
  const int n = static_cast<int>(perm.size());
  const int N = fs.nodes();
  if (t.rank != n || t.data.size() != ipow(N, n)) throw DomainError("rank mismatch");
  check_perm(perm);
  const auto inv = inversions(perm);
  std::vector<std::size_t> stride(n);
  for (int k = 0; k < n; ++k) stride[k] = ipow(N, n - 1 - k);
  Tensor out{n, std::vector<cplx>(t.data.size())};
  for_each_index(N, n, [&](std::size_t o, const int* d) {
    std::size_t in = 0;
    for (int k = 0; k < n; ++k) in += d[perm[k]] * stride[k];
    cplx f = 1.0;
    for (const auto& [a, b] : inv) f *= fs.s(d[a], d[b]);
    out.data[o] = f * t.data[in];
  });
  return out;
}

namespace {

Tensor symmetrize_dense(const FockSpace& fs, const Tensor& t) {
  const int n = t.rank;
  const int N = fs.nodes();
  const auto perms = all_perms(n);
  std::vector<std::vector<std::pair<int, int>>> invs;
  invs.reserve(perms.size());
  for (const auto& p : perms) invs.push_back(inversions(p));
  std::vector<std::size_t> stride(n);
  for (int k = 0; k < n; ++k) stride[k] = ipow(N, n - 1 - k);
  const double scale = 1.0 / static_cast<double>(perms.size());
  Tensor out{n, std::vector<cplx>(t.data.size())};
  for_each_index(N, n, [&](std::size_t o, const int* d) {
    cplx acc = 0.0;
    for (std::size_t q = 0; q < perms.size(); ++q) {
      const Perm& p = perms[q];
      std::size_t in = 0;
      for (int k = 0; k < n; ++k) in += d[p[k]] * stride[k];
      const cplx v = t.data[in];
      if (v == cplx(0.0)) continue;
      cplx f = 1.0;
      for (const auto& [a, b] : invs[q]) f *= fs.s(d[a], d[b]);
      acc += f * v;
    }
    out.data[o] = scale * acc;
  });
  return out;
}

// Scatter form for inputs with few nonzeros, e.g. tensor products of
// compactly supported wave functions.
Tensor symmetrize_sparse(const FockSpace& fs, const Tensor& t, const std::vector<std::size_t>& nz) {
  const int n = t.rank;
  const int N = fs.nodes();
  const auto perms = all_perms(n);
  const double scale = 1.0 / static_cast<double>(perms.size());
  std::vector<std::size_t> stride(n);
  for (int k = 0; k < n; ++k) stride[k] = ipow(N, n - 1 - k);
  Tensor out{n, std::vector<cplx>(t.data.size())};
  int j[kMaxRank], d[kMaxRank];
  for (const Perm& p : perms) {
    const auto inv = inversions(p);
    for (std::size_t idx : nz) {
      std::size_t r = idx;
      for (int k = n - 1; k >= 0; --k) {
        j[k] = static_cast<int>(r % N);
        r /= N;
      }
      // output digits satisfy d[p[k]] = j[k]
      std::size_t o = 0;
      for (int k = 0; k < n; ++k) d[p[k]] = j[k];
      for (int k = 0; k < n; ++k) o += d[k] * stride[k];
      cplx f = 1.0;
      for (const auto& [a, b] : inv) f *= fs.s(d[a], d[b]);
      out.data[o] += scale * f * t.data[idx];
    }
  }
  return out;
}

}  // namespace

Tensor symmetrize(const FockSpace& fs, const Tensor& t) {
  const int n = t.rank;
  if (n > fs.cap()) throw DomainError("symmetrization rank exceeds cap");
  if (t.data.size() != ipow(fs.nodes(), n)) throw DomainError("rank mismatch");
  if (n <= 1) return t;
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < t.data.size(); ++i)
    if (t.data[i] != cplx(0.0)) nz.push_back(i);
  if (nz.size() * static_cast<std::size_t>(factorial(n)) < t.data.size() / 4) return symmetrize_sparse(fs, t, nz);
  return symmetrize_dense(fs, t);
}

FockVector symmetrize(const FockSpace& fs, const FockVector& v) {
  FockVector out(v.grid_ptr(), v.n_max());
  for (int n = 0; n <= v.n_max(); ++n) out.component(n) = symmetrize(fs, v.component(n));
  return out;
}

Tensor tensor_product(const std::vector<WaveFunction1>& psis) {
  const int n = static_cast<int>(psis.size());
  if (n == 0) return Tensor{0, {cplx(1.0)}};
  const int N = psis[0].grid->count;
  for (const auto& p : psis)
    if (static_cast<int>(p.values.size()) != N) throw DomainError("wave function size mismatch");
  Tensor t{n, std::vector<cplx>(ipow(N, n))};
  for_each_index(N, n, [&](std::size_t o, const int* d) {
    cplx v = 1.0;
    for (int k = 0; k < n; ++k) v *= psis[k].values[d[k]];
    t.data[o] = v;
  });
  return t;
}

FockVector annihilate(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi) {
  check_same_grid(fs, phi.grid());
  check_wave(fs, psi);
  const int N = fs.nodes();
  const int top = std::max(phi.n_max() - 1, 0);
  FockVector out(phi.grid_ptr(), top);
  if (phi.n_max() == 0) return out;
  std::vector<cplx> wpsi(N);
  for (int j = 0; j < N; ++j) wpsi[j] = fs.grid().weights[j] * psi.values[j];
  for (int n = 0; n <= top; ++n) {
    const auto& src = phi.component(n + 1).data;
    auto& dst = out.component(n).data;
    const std::size_t block = dst.size();
    const double c = std::sqrt(static_cast<double>(n + 1));
    const auto blk = static_cast<std::ptrdiff_t>(block);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < blk; ++r) {
      cplx acc = 0.0;
      for (int j = 0; j < N; ++j) acc += wpsi[j] * src[j * block + r];
      dst[r] = c * acc;
    }
  }
  return out;
}

FockVector create(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi) {
  check_same_grid(fs, phi.grid());
  check_wave(fs, psi);
  const int top = phi.n_max() + 1;
  if (top > fs.cap()) throw DomainError("creation exceeds particle cap");
  const int N = fs.nodes();
  FockVector out(phi.grid_ptr(), top);
  for (int n = 1; n <= top; ++n) {
    const auto& src = phi.component(n - 1).data;
    auto& dst = out.component(n).data;
    const double c = 1.0 / std::sqrt(static_cast<double>(n));
    for_each_index(N, n, [&](std::size_t o, const int* d) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k) {
        cplx f = psi.values[d[k]];
        for (int j = 0; j < k; ++j) f *= fs.s(d[k], d[j]);
        std::size_t in = 0;
        for (int m = 0; m < n; ++m)
          if (m != k) in = in * N + d[m];
        acc += f * src[in];
      }
      dst[o] = c * acc;
    });
  }
  return out;
}

FockVector create_projected(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi) {
  check_same_grid(fs, phi.grid());
  check_wave(fs, psi);
  const int top = phi.n_max() + 1;
  if (top > fs.cap()) throw DomainError("creation exceeds particle cap");
  const int N = fs.nodes();
  FockVector out(phi.grid_ptr(), top);
  for (int n = 1; n <= top; ++n) {
    const auto& src = phi.component(n - 1).data;
    Tensor t{n, std::vector<cplx>(ipow(N, n))};
    const std::size_t block = src.size();
    for (int j = 0; j < N; ++j)
      for (std::size_t r = 0; r < block; ++r) t.data[j * block + r] = psi.values[j] * src[r];
    Tensor p = symmetrize(fs, t);
    const double c = std::sqrt(static_cast<double>(n));
    for (auto& x : p.data) x *= c;
    out.component(n) = std::move(p);
  }
  return out;
}

FockVector annihilate_pair(const FockSpace& fs, const std::vector<cplx>& K, const FockVector& phi) {
  check_same_grid(fs, phi.grid());
  const int N = fs.nodes();
  if (K.size() != static_cast<std::size_t>(N) * N) throw DomainError("kernel size mismatch");
  const int top = std::max(phi.n_max() - 2, 0);
  FockVector out(phi.grid_ptr(), top);
  if (phi.n_max() < 2) return out;
  const auto& w = fs.grid().weights;
  for (int n = 0; n <= top; ++n) {
    const auto& src = phi.component(n + 2).data;
    auto& dst = out.component(n).data;
    const std::size_t block = dst.size();
    const double c = std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    const auto blk = static_cast<std::ptrdiff_t>(block);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < blk; ++r) {
      cplx acc = 0.0;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
          acc += w[a] * w[b] * K[static_cast<std::size_t>(a) * N + b] * src[(static_cast<std::size_t>(b) * N + a) * block + r];
      dst[r] = c * acc;
    }
  }
  return out;
}

FockVector create_annihilate(const FockSpace& fs, const std::vector<cplx>& K, const FockVector& phi) {
  check_same_grid(fs, phi.grid());
  const int N = fs.nodes();
  if (K.size() != static_cast<std::size_t>(N) * N) throw DomainError("kernel size mismatch");
  const auto& w = fs.grid().weights;
  FockVector out(phi.grid_ptr(), phi.n_max());
  for (int n = 1; n <= phi.n_max(); ++n) {
    const auto& src = phi.component(n).data;
    auto& dst = out.component(n).data;
    const std::size_t block = ipow(N, n - 1);
    for_each_index(N, n, [&](std::size_t o, const int* d) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k) {
        cplx f = 1.0;
        for (int j = 0; j < k; ++j) f *= fs.s(d[k], d[j]);
        std::size_t rest = 0;
        for (int m = 0; m < n; ++m)
          if (m != k) rest = rest * N + d[m];
        cplx inner_sum = 0.0;
        for (int a = 0; a < N; ++a)
          inner_sum += w[a] * K[static_cast<std::size_t>(d[k]) * N + a] * src[a * block + rest];
        acc += f * inner_sum;
      }
      dst[o] = acc;
    });
  }
  return out;
}

ZfReport check_zf_relations(const FockSpace& fs, const WaveFunction1& psi, const WaveFunction1& phi,
                            const FockVector& Phi, double tol) {
  if (Phi.n_max() < 2) throw DomainError("zf check needs n_max >= 2");
  const int N = fs.nodes();
  std::vector<cplx> K1(static_cast<std::size_t>(N) * N), K2(K1.size());
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      K1[static_cast<std::size_t>(a) * N + b] = fs.s(b, a) * phi.values[a] * psi.values[b];
      K2[static_cast<std::size_t>(a) * N + b] = fs.s(a, b) * phi.values[a] * psi.values[b];
    }
  ZfReport r;
  r.tol = tol;
  const FockVector lhs1 = annihilate(fs, psi, annihilate(fs, phi, Phi));
  r.zz = norm(lhs1 - annihilate_pair(fs, K1, Phi));
  cplx contraction = 0.0;
  for (int i = 0; i < N; ++i) contraction += fs.grid().weights[i] * psi.values[i] * phi.values[i];
  const FockVector lhs2 = annihilate(fs, psi, create(fs, phi, Phi));
  const FockVector rhs2 = create_annihilate(fs, K2, Phi) + contraction * Phi;
  r.zzdag = norm(lhs2 - rhs2);
  r.pass = r.zz <= tol && r.zzdag <= tol;
  return r;
}

PoincareElement compose(const PoincareElement& g, const PoincareElement& h) {
  const double c = std::cosh(g.lambda), s = std::sinh(g.lambda);
  return {g.x0 + c * h.x0 + s * h.x1, g.x1 + s * h.x0 + c * h.x1, g.lambda + h.lambda};
}

PoincareElement inverse(const PoincareElement& g) {
  const double c = std::cosh(g.lambda), s = std::sinh(g.lambda);
  // -Lambda(-lambda) x
  return {-(c * g.x0 - s * g.x1), -(-s * g.x0 + c * g.x1), -g.lambda};
}

FockVector poincare_apply(const FockSpace& fs, const PoincareElement& g, const FockVector& phi, double support_tol) {
  check_same_grid(fs, phi.grid());
  const auto& grid = fs.grid();
  const int N = grid.count;
  const double sh = g.lambda / grid.spacing;
  const double shr = std::round(sh);
  if (std::abs(sh - shr) > 1e-9 * std::max(1.0, std::abs(sh))) throw DomainError("boost is not a whole number of grid steps");
  const int shift = static_cast<int>(shr);
  const double m = fs.model().mass();
  std::vector<cplx> ph(N);
  for (int i = 0; i < N; ++i) {
    const double px = m * (std::cosh(grid.nodes[i]) * g.x0 - std::sinh(grid.nodes[i]) * g.x1);
    ph[i] = std::exp(cplx(0.0, px));
  }
  FockVector out(phi.grid_ptr(), phi.n_max());
  for (int n = 0; n <= phi.n_max(); ++n) {
    const auto& src = phi.component(n).data;
    auto& dst = out.component(n).data;
    if (shift != 0) {
      double amax = 0.0;
      for (const auto& x : src) amax = std::max(amax, std::abs(x));
      const double thresh = support_tol * amax;
      bool overflow = false;
      for_each_index_serial(N, n, [&](std::size_t o, const int* d) {
        if (overflow || std::abs(src[o]) <= thresh) return;
        for (int k = 0; k < n; ++k) {
          const int t = d[k] + shift;
          if (t < 0 || t >= N) {
            overflow = true;
            return;
          }
        }
      });
      if (overflow) throw SupportError("boost moves nonzero amplitude off the grid");
    }
    for_each_index(N, n, [&](std::size_t o, const int* d) {
      std::size_t in = 0;
      cplx f = 1.0;
      for (int k = 0; k < n; ++k) {
        const int s = d[k] - shift;
        if (s < 0 || s >= N) {
          dst[o] = 0.0;
          return;
        }
        in = in * N + s;
        f *= ph[d[k]];
      }
      dst[o] = f * src[in];
    });
  }
  return out;
}

FockVector reflect_j(const FockVector& phi) {
  const int N = phi.grid().count;
  FockVector out(phi.grid_ptr(), phi.n_max());
  for (int n = 0; n <= phi.n_max(); ++n) {
    const auto& src = phi.component(n).data;
    auto& dst = out.component(n).data;
    for_each_index(N, n, [&](std::size_t o, const int* d) {
      std::size_t in = 0;
      for (int k = n - 1; k >= 0; --k) in = in * N + d[k];
      dst[o] = std::conj(src[in]);
    });
  }
  return out;
}

FockVector reflect_gamma(const FockVector& phi) {
  const int N = phi.grid().count;
  FockVector out(phi.grid_ptr(), phi.n_max());
  for (int n = 0; n <= phi.n_max(); ++n) {
    const auto& src = phi.component(n).data;
    auto& dst = out.component(n).data;
    for_each_index(N, n, [&](std::size_t o, const int* d) {
      std::size_t in = 0;
      for (int k = 0; k < n; ++k) in = in * N + (N - 1 - d[k]);
      dst[o] = std::conj(src[in]);
    });
  }
  return out;
}

FockVector modular_boost(const FockSpace& fs, double t, const FockVector& phi, double support_tol) {
  return poincare_apply(fs, PoincareElement{0.0, 0.0, -2.0 * kPi * t}, phi, support_tol);
}

double symmetry_residual(const FockSpace& fs, const FockVector& phi) {
  double r = 0.0;
  for (int n = 2; n <= phi.n_max(); ++n) {
    const Tensor& t = phi.component(n);
    for (int k = 0; k + 1 < n; ++k) {
      Tensor d = apply_dn(fs, transposition(n, k), t);
      for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] -= t.data[i];
      r = std::max(r, norm(d, phi.grid()));
    }
  }
  return r;
}

Tensor random_tensor(const RapidityGrid& g, int rank, Rng& rng) {
  require_rank(rank);
  Tensor t{rank, std::vector<cplx>(ipow(g.count, rank))};
  for (auto& x : t.data) x = rng.cnormal();
  return t;
}

WaveFunction1 random_wave(const GridPtr& g, Rng& rng) {
  WaveFunction1 w{g, std::vector<cplx>(g->count)};
  for (auto& x : w.values) x = rng.cnormal();
  const double nn = w.norm();
  for (auto& x : w.values) x /= nn;
  return w;
}

FockVector random_fock(const FockSpace& fs, int n_max, Rng& rng) {
  FockVector v(fs.grid_ptr(), n_max);
  for (int n = 0; n <= n_max; ++n) v.component(n) = symmetrize(fs, random_tensor(fs.grid(), n, rng));
  const double nn = norm(v);
  v *= 1.0 / nn;
  return v;
}

namespace serial {

namespace {
std::vector<int> digits_of(std::size_t o, int N, int n) {
  std::vector<int> d(n);
  for (int k = n - 1; k >= 0; --k) {
    d[k] = static_cast<int>(o % N);
    o /= N;
  }
  return d;
}
std::size_t flat_of(const std::vector<int>& d, int N) {
  std::size_t o = 0;
  for (int x : d) o = o * N + x;
  return o;
}
}  // namespace

Tensor apply_dn(const FockSpace& fs, const Perm& perm, const Tensor& t) {
  const int n = static_cast<int>(perm.size());
  const int N = fs.nodes();
  if (t.rank != n || t.data.size() != ipow(N, n)) throw DomainError("rank mismatch");
  Tensor out{n, std::vector<cplx>(t.data.size())};
  const auto& th = fs.grid().nodes;
  for (std::size_t o = 0; o < t.data.size(); ++o) {
    const auto d = digits_of(o, N, n);
    std::vector<int> src(n);
    for (int k = 0; k < n; ++k) src[k] = d[perm[k]];
    cplx f = 1.0;
    for (int l = 0; l < n; ++l)
      for (int k = l + 1; k < n; ++k)
        if (perm[l] > perm[k]) f *= fs.model()(th[d[perm[l]]] - th[d[perm[k]]]);
    out.data[o] = f * t.data[flat_of(src, N)];
  }
  return out;
}

Tensor symmetrize(const FockSpace& fs, const Tensor& t) {
  const auto perms = all_perms(t.rank);
  Tensor acc{t.rank, std::vector<cplx>(t.data.size())};
  for (const auto& p : perms) {
    const Tensor d = serial::apply_dn(fs, p, t);
    for (std::size_t i = 0; i < d.data.size(); ++i) acc.data[i] += d.data[i];
  }
  for (auto& x : acc.data) x /= static_cast<double>(perms.size());
  return acc;
}

FockVector annihilate(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi) {
  const int N = fs.nodes();
  const int top = std::max(phi.n_max() - 1, 0);
  FockVector out(phi.grid_ptr(), top);
  if (phi.n_max() == 0) return out;
  for (int n = 0; n <= top; ++n) {
    auto& dst = out.component(n).data;
    for (std::size_t r = 0; r < dst.size(); ++r) {
      const auto d = digits_of(r, N, n);
      cplx acc = 0.0;
      for (int j = 0; j < N; ++j) {
        std::vector<int> full{j};
        full.insert(full.end(), d.begin(), d.end());
        acc += fs.grid().weights[j] * psi.values[j] * phi.component(n + 1).data[flat_of(full, N)];
      }
      dst[r] = std::sqrt(static_cast<double>(n + 1)) * acc;
    }
  }
  return out;
}

FockVector create(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi) {
  const int N = fs.nodes();
  const int top = phi.n_max() + 1;
  if (top > fs.cap()) throw DomainError("creation exceeds particle cap");
  const auto& th = fs.grid().nodes;
  FockVector out(phi.grid_ptr(), top);
  for (int n = 1; n <= top; ++n) {
    auto& dst = out.component(n).data;
    for (std::size_t o = 0; o < dst.size(); ++o) {
      const auto d = digits_of(o, N, n);
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k) {
        cplx f = psi.values[d[k]];
        for (int j = 0; j < k; ++j) f *= fs.model()(th[d[k]] - th[d[j]]);
        std::vector<int> rest;
        for (int m = 0; m < n; ++m)
          if (m != k) rest.push_back(d[m]);
        acc += f * phi.component(n - 1).data[flat_of(rest, N)];
      }
      dst[o] = acc / std::sqrt(static_cast<double>(n));
    }
  }
  return out;
}

}  // namespace serial

}  // namespace fsm
