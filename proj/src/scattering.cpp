#include "fsm/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsm/errors.hpp"

namespace fsm {

namespace {

double sqrt_factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return std::sqrt(f);
}

std::pair<int, int> support_of(const WaveFunction1& w) {
  int lo = -1, hi = -1;
  for (int i = 0; i < static_cast<int>(w.values.size()); ++i)
    if (w.values[i] != 0.0) {
      if (lo < 0) lo = i;
      hi = i;
    }
  if (lo < 0) throw DomainError("wave packet entry vanishes identically");
  return {lo, hi};
}

FockVector chain(const FockSpace& fs, const OrderedWavePacket& p, bool reversed) {
  FockVector v = FockVector::vacuum(fs.grid_ptr(), 0);
  // The rightmost creator acts first.
  for (int k = p.size() - 1; k >= 0; --k) v = create(fs, p[reversed ? p.size() - 1 - k : k], v);
  return v;
}

FockVector projected(const FockSpace& fs, const OrderedWavePacket& p, bool reversed) {
  std::vector<WaveFunction1> psis = p.psis();
  if (reversed) std::reverse(psis.begin(), psis.end());
  const int n = p.size();
  FockVector v(fs.grid_ptr(), n);
  Tensor t = symmetrize(fs, tensor_product(psis));
  const double c = sqrt_factorial(n);
  for (auto& x : t.data) x *= c;
  v.component(n) = std::move(t);
  return v;
}

}  // namespace

OrderedWavePacket::OrderedWavePacket(std::vector<WaveFunction1> psis) : psis_(std::move(psis)) {
  if (psis_.empty()) throw DomainError("empty wave packet");
  for (const auto& w : psis_) {
    if (!w.grid || w.grid != psis_.front().grid) throw DomainError("packet entries must share one grid");
    supports_.push_back(support_of(w));
  }
  for (std::size_t k = 1; k < supports_.size(); ++k)
    if (supports_[k].first <= supports_[k - 1].second + 1)
      throw DomainError("packet supports must be strictly ordered with a gap");
}

OrderedWavePacket OrderedWavePacket::from_unordered(std::vector<WaveFunction1> psis) {
  std::stable_sort(psis.begin(), psis.end(), [](const WaveFunction1& a, const WaveFunction1& b) {
    return support_of(a).first < support_of(b).first;
  });
  return OrderedWavePacket(std::move(psis));
}

double OrderedWavePacket::norm_product() const {
  double p = 1.0;
  for (const auto& w : psis_) p *= w.norm();
  return p;
}

OrderedWavePacket random_ordered_packet(const GridPtr& grid, int n, Rng& rng) {
  if (n < 1) throw DomainError("packet needs at least one entry");
  const int N = grid->count;
  const int block = (N - (n - 1)) / n;
  if (block < 1) throw DomainError("grid too small for the requested packet");
  std::vector<WaveFunction1> psis;
  for (int k = 0; k < n; ++k) {
    WaveFunction1 w{grid, std::vector<cplx>(N)};
    const int start = k * (block + 1);
    // Random sub-interval of the block keeps the layout varied between trials.
    const int a = start + static_cast<int>(rng.integer(0, block - 1));
    const int b = a + static_cast<int>(rng.integer(0, start + block - 1 - a));
    for (int i = a; i <= b; ++i) {
      do {
        w.values[i] = rng.cnormal();
      } while (w.values[i] == 0.0);
    }
    const double nn = w.norm();
    for (auto& x : w.values) x /= nn;
    psis.push_back(std::move(w));
  }
  return OrderedWavePacket(std::move(psis));
}

FockVector out_state(const FockSpace& fs, const OrderedWavePacket& packet) { return chain(fs, packet, false); }
FockVector in_state(const FockSpace& fs, const OrderedWavePacket& packet) { return chain(fs, packet, true); }
FockVector out_state_projected(const FockSpace& fs, const OrderedWavePacket& packet) {
  return projected(fs, packet, false);
}
FockVector in_state_projected(const FockSpace& fs, const OrderedWavePacket& packet) {
  return projected(fs, packet, true);
}

cplx smatrix_factor(const ScatteringFunction& S, const std::vector<double>& thetas) {
  cplx f = 1.0;
  for (std::size_t k = 0; k < thetas.size(); ++k)
    for (std::size_t l = k + 1; l < thetas.size(); ++l) f *= S(std::abs(thetas[k] - thetas[l]));
  return f;
}

Perm sorting_permutation(const std::vector<double>& thetas, Direction dir) {
  Perm p(thetas.size());
  std::iota(p.begin(), p.end(), 0);
  std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return thetas[a] < thetas[b]; });
  if (dir == Direction::in) std::reverse(p.begin(), p.end());
  return p;
}

cplx s_pi(const ScatteringFunction& S, const Perm& perm, const std::vector<double>& thetas) {
  const int n = static_cast<int>(perm.size());
  if (thetas.size() != perm.size()) throw DomainError("permutation and rapidity tuple differ in length");
  cplx f = 1.0;
  for (int l = 0; l < n; ++l)
    for (int k = l + 1; k < n; ++k)
      if (perm[l] > perm[k]) f *= S(thetas[perm[l]] - thetas[perm[k]]);
  return f;
}

cplx moller_multiplier(const ScatteringFunction& S, Direction dir, const std::vector<double>& thetas) {
  const cplx v = s_pi(S, sorting_permutation(thetas, dir), thetas);
  return dir == Direction::out ? 1.0 / v : v;
}

std::vector<cplx> two_particle_smatrix(const FockSpace& fs, const OrderedWavePacket& pair) {
  if (pair.size() != 2) throw DomainError("two-particle S-matrix needs an ordered pair");
  const int N = fs.nodes();
  const auto& th = fs.grid().nodes;
  std::vector<cplx> out(static_cast<std::size_t>(N) * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const std::vector<double> t{th[a], th[b]};
      out[static_cast<std::size_t>(a) * N + b] =
          moller_multiplier(fs.model(), Direction::out, t) * moller_multiplier(fs.model(), Direction::in, t);
    }
  return out;
}

cplx smatrix_overlap_oracle(const FockSpace& fs, const OrderedWavePacket& packet) {
  const int n = packet.size();
  const FockSpace plain(free_model(fs.model().mass()), fs.grid_ptr(), std::max(n, 1));
  Tensor X = symmetrize(plain, tensor_product(packet.psis()));
  const double c = sqrt_factorial(n);
  for (auto& x : X.data) x *= c;
  Tensor SX{n, std::vector<cplx>(X.data.size())};
  const int N = fs.nodes();
  std::vector<int> d(n);
  for (std::size_t o = 0; o < X.data.size(); ++o) {
    if (X.data[o] == 0.0) continue;
    std::size_t r = o;
    for (int k = n - 1; k >= 0; --k) {
      d[k] = static_cast<int>(r % N);
      r /= N;
    }
    cplx f = 1.0;
    // Nodes ascend, so S(|t_k - t_l|) = s(max, min).
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) f *= fs.s(std::max(d[k], d[l]), std::min(d[k], d[l]));
    SX.data[o] = f * X.data[o];
  }
  return inner(X, SX, fs.grid());
}

double SmatrixReport::max_residual() const { return std::max({max_multiplier, max_state}); }

SmatrixReport recover_smatrix(const FockSpace& fs, int n, int trials, std::uint64_t seed, double tol) {
  if (n < 1 || n > fs.cap()) throw DomainError("particle number outside the Fock space cap");
  if (trials < 1) throw DomainError("need at least one trial");
  SmatrixReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  rep.tol = tol;
  Rng rng(seed);
  const double L = fs.grid().half_width;
  for (int t = 0; t < trials; ++t) {
    SmatrixTrial row;
    row.trial = t;
    std::vector<double> th(n);
    for (auto& x : th) x = L * (2.0 * rng.uniform() - 1.0);
    const cplx prod = moller_multiplier(fs.model(), Direction::out, th) * moller_multiplier(fs.model(), Direction::in, th);
    row.multiplier_residual = std::abs(prod - smatrix_factor(fs.model(), th));

    const OrderedWavePacket packet = random_ordered_packet(fs.grid_ptr(), n, rng);
    const FockVector out = out_state(fs, packet), in = in_state(fs, packet);
    row.construction_residual =
        std::max(norm(out - out_state_projected(fs, packet)), norm(in - in_state_projected(fs, packet)));
    row.overlap = inner(out, in);
    row.oracle = smatrix_overlap_oracle(fs, packet);
    const double np = packet.norm_product();
    row.state_residual = std::abs(row.overlap - row.oracle) / (np * np);

    rep.max_multiplier = std::max(rep.max_multiplier, row.multiplier_residual);
    rep.max_state = std::max(rep.max_state, row.state_residual);
    rep.max_construction = std::max(rep.max_construction, row.construction_residual);
    rep.rows.push_back(row);
  }
  rep.pass = rep.max_multiplier <= tol && rep.max_state <= tol;
  return rep;
}

}  // namespace fsm
