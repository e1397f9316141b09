#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fsm/fock_space.hpp"

namespace fsm {

// psi_1 < psi_2 < ... on the grid, with at least one empty node between consecutive supports.
class OrderedWavePacket {
 public:
  explicit OrderedWavePacket(std::vector<WaveFunction1> psis);
  // Sorts the entries by support before validating.
  static OrderedWavePacket from_unordered(std::vector<WaveFunction1> psis);

  int size() const { return static_cast<int>(psis_.size()); }
  const std::vector<WaveFunction1>& psis() const { return psis_; }
  const WaveFunction1& operator[](int k) const { return psis_.at(k); }
  // First and last node index with nonzero amplitude.
  std::pair<int, int> support(int k) const { return supports_.at(k); }
  double norm_product() const;

 private:
  std::vector<WaveFunction1> psis_;
  std::vector<std::pair<int, int>> supports_;
};

// Normalized random packet with n consecutive blocks separated by empty nodes.
OrderedWavePacket random_ordered_packet(const GridPtr& grid, int n, Rng& rng);

// z+(psi_1) ... z+(psi_n) Omega
FockVector out_state(const FockSpace& fs, const OrderedWavePacket& packet);
// z+(psi_n) ... z+(psi_1) Omega
FockVector in_state(const FockSpace& fs, const OrderedWavePacket& packet);
// sqrt(n!) P_n (psi_1 (x) ... (x) psi_n) and its reversed-order counterpart.
FockVector out_state_projected(const FockSpace& fs, const OrderedWavePacket& packet);
FockVector in_state_projected(const FockSpace& fs, const OrderedWavePacket& packet);

// prod_{k<l} S(|theta_k - theta_l|)
cplx smatrix_factor(const ScatteringFunction& S, const std::vector<double>& thetas);

enum class Direction { in, out };

// out: stable ascending sort. in: the exact reverse of the out order, so tied pairs are exchanged.
Perm sorting_permutation(const std::vector<double>& thetas, Direction dir);
// S^pi(theta) with the apply_dn convention.
cplx s_pi(const ScatteringFunction& S, const Perm& perm, const std::vector<double>& thetas);
// out: S^pi(theta)^{-1}; in: S^pi(theta).
cplx moller_multiplier(const ScatteringFunction& S, Direction dir, const std::vector<double>& thetas);

// (a, b) -> moller(out) * moller(in) at node pairs, row-major N x N.
std::vector<cplx> two_particle_smatrix(const FockSpace& fs, const OrderedWavePacket& pair);

// <X, S X> with X = sqrt(n!) P+ (psi_1 (x) ... (x) psi_n), P+ the plain symmetrizer.
cplx smatrix_overlap_oracle(const FockSpace& fs, const OrderedWavePacket& packet);

struct SmatrixTrial {
  int trial = 0;
  double multiplier_residual = 0.0;    // |moller(out) moller(in) - smatrix_factor|
  double state_residual = 0.0;         // |<out, in> - <X, S X>| / prod ||psi_k||^2
  double construction_residual = 0.0;  // max over in/out of || chain - sqrt(n!) P_n ||
  cplx overlap;
  cplx oracle;
};

struct SmatrixReport {
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<SmatrixTrial> rows;
  double max_multiplier = 0.0;
  double max_state = 0.0;
  double max_construction = 0.0;
  double tol = 0.0;
  bool pass = false;
  double max_residual() const;
};

SmatrixReport recover_smatrix(const FockSpace& fs, int n, int trials, std::uint64_t seed, double tol);

}  // namespace fsm
