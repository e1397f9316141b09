#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "fsm/rng.hpp"
#include "fsm/scattering_function.hpp"

namespace fsm {

// Symmetric uniform rapidity grid with trapezoid weights. count is odd so 0 is a node.
struct RapidityGrid {
  double half_width = 0.0;
  int count = 0;
  double spacing = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static RapidityGrid make(double half_width, int count);
  int mirror(int i) const { return count - 1 - i; }
};

using GridPtr = std::shared_ptr<const RapidityGrid>;
GridPtr make_grid(double half_width, int count);

struct WaveFunction1 {
  GridPtr grid;
  std::vector<cplx> values;

  double norm() const;
};

// Rank-n tensor on the grid, row-major with the first slot most significant.
struct Tensor {
  int rank = 0;
  std::vector<cplx> data;
};

std::size_t ipow(std::size_t base, int e);

class FockVector {
 public:
  FockVector() = default;
  FockVector(GridPtr grid, int n_max);
  static FockVector vacuum(GridPtr grid, int n_max = 0);
  static FockVector one_particle(const WaveFunction1& psi);

  int n_max() const { return static_cast<int>(comp_.size()) - 1; }
  const RapidityGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  Tensor& component(int n) { return comp_.at(n); }
  const Tensor& component(int n) const { return comp_.at(n); }

  // Grows or truncates the particle-number cutoff.
  FockVector resized(int n_max) const;

  FockVector& operator+=(const FockVector& o);
  FockVector& operator-=(const FockVector& o);
  FockVector& operator*=(cplx c);

 private:
  GridPtr grid_;
  std::vector<Tensor> comp_;
};

FockVector operator+(FockVector a, const FockVector& b);
FockVector operator-(FockVector a, const FockVector& b);
FockVector operator*(cplx c, FockVector a);

// Antilinear in the first argument, weights prod_k w_{i_k}.
cplx inner(const FockVector& a, const FockVector& b);
cplx inner(const Tensor& a, const Tensor& b, const RapidityGrid& g);
double norm(const FockVector& a);
double norm(const Tensor& a, const RapidityGrid& g);
// || (N + shift)^{1/2} Phi ||
double number_norm(const FockVector& a, int shift);

// Model bound to a grid; caches S(theta_i - theta_j).
class FockSpace {
 public:
  FockSpace(ScatteringFunction S, GridPtr grid, int cap = 6);

  const ScatteringFunction& model() const { return S_; }
  const RapidityGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int cap() const { return cap_; }
  int nodes() const { return grid_->count; }
  // S(theta_i - theta_j)
  cplx s(int i, int j) const { return table_[static_cast<std::size_t>(i) * grid_->count + j]; }
  const std::vector<cplx>& table() const { return table_; }

 private:
  ScatteringFunction S_;
  GridPtr grid_;
  int cap_;
  std::vector<cplx> table_;
};

using Perm = std::vector<int>;

Perm identity_perm(int n);
// (p o q)(k) = p(q(k)); apply_dn(p o q) = apply_dn(p) apply_dn(q).
Perm compose(const Perm& p, const Perm& q);
Perm inverse(const Perm& p);
// Adjacent transposition of slots k and k+1 (0-based).
Perm transposition(int n, int k);
std::vector<Perm> all_perms(int n);

// (D(pi) f)(theta) = S^pi(theta) f(theta_{pi(1)}, ..., theta_{pi(n)})
Tensor apply_dn(const FockSpace& fs, const Perm& perm, const Tensor& t);
// Mean of apply_dn over all n! permutations.
Tensor symmetrize(const FockSpace& fs, const Tensor& t);
FockVector symmetrize(const FockSpace& fs, const FockVector& v);
Tensor tensor_product(const std::vector<WaveFunction1>& psis);

FockVector annihilate(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi);
FockVector create(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi);
// sqrt(n) P_n (psi (x) Phi_{n-1}); agrees with create on S-symmetric input.
FockVector create_projected(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi);

// Two-slot operators with kernel K(a, b) = K[a * N + b].
// (z x z)(K) = int K(t1, t2) z(t1) z(t2)
FockVector annihilate_pair(const FockSpace& fs, const std::vector<cplx>& K, const FockVector& phi);
// (z+ x z)(K) = int K(t1, t2) z+(t1) z(t2)
FockVector create_annihilate(const FockSpace& fs, const std::vector<cplx>& K, const FockVector& phi);

struct ZfReport {
  double zz = 0.0;     // || z(psi)z(phi) - (z x z)(S*(phi (x) psi)) ||
  double zzdag = 0.0;  // || z(psi)z+(phi) - (z+ x z)(S(phi (x) psi)) - <conj psi, phi> ||
  double tol = 0.0;
  bool pass = false;
};

ZfReport check_zf_relations(const FockSpace& fs, const WaveFunction1& psi, const WaveFunction1& phi,
                            const FockVector& Phi, double tol);

struct PoincareElement {
  double x0 = 0.0;
  double x1 = 0.0;
  double lambda = 0.0;
};

// Composition g * h: U(g)U(h) = U(g * h).
PoincareElement compose(const PoincareElement& g, const PoincareElement& h);
PoincareElement inverse(const PoincareElement& g);

// (U(x, l) Psi)_n(theta) = exp(i sum_k p(theta_k).x) Psi_n(theta - l)
FockVector poincare_apply(const FockSpace& fs, const PoincareElement& g, const FockVector& phi,
                          double support_tol = 1e-12);
FockVector reflect_j(const FockVector& phi);
FockVector reflect_gamma(const FockVector& phi);
// U(0, -2 pi t)
FockVector modular_boost(const FockSpace& fs, double t, const FockVector& phi, double support_tol = 1e-12);

// max_n,k || D(tau_k) Psi_n - Psi_n ||
double symmetry_residual(const FockSpace& fs, const FockVector& phi);

Tensor random_tensor(const RapidityGrid& g, int rank, Rng& rng);
WaveFunction1 random_wave(const GridPtr& g, Rng& rng);
FockVector random_fock(const FockSpace& fs, int n_max, Rng& rng);

namespace serial {
Tensor apply_dn(const FockSpace& fs, const Perm& perm, const Tensor& t);
Tensor symmetrize(const FockSpace& fs, const Tensor& t);
FockVector annihilate(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi);
FockVector create(const FockSpace& fs, const WaveFunction1& psi, const FockVector& phi);
}  // namespace serial

}  // namespace fsm
