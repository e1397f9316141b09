#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsm/scattering_function.hpp"

namespace fsm {

// K(x, y) = E(x) sum_j c_j / (y - (alpha_j x + i beta_j)),  E(x) = exp(-damping cosh x).
struct KernelTerm {
  cplx c;
  double alpha = 1.0;
  double beta = 0.0;
};

enum class KernelKind { general, modular, bose_phi, bose_pi };

struct KernelOperator {
  KernelKind kind = KernelKind::general;
  double damping = 0.0;
  std::vector<KernelTerm> terms;

  // exp(-a cosh x) / (x - y + i b)
  static KernelOperator general(double a, double b);
  // exp(-(m s/2) cosh t) / (i pi (t' - t - i kappa/2))
  static KernelOperator modular(double s, double kappa, double mass);
  static KernelOperator bose_phi(double s, double mass);
  static KernelOperator bose_pi(double s, double mass);

  cplx operator()(double x, double y) const;
  std::string name() const;
};

struct TraceNormOptions {
  double window = 12.0;  // half-width L of the x grid
  int nodes = 400;       // M
  double rel_tol = 1e-3;
  int max_refinements = 3;
};

struct TraceNormResult {
  double value = 0.0;
  double window = 0.0;  // (L, M) of the reported value
  int nodes = 0;
  double rel_change = 0.0;  // against the previous (L/2, M/2) level; 0 without refinement
  bool converged = true;
  int refinements = 0;
  std::vector<double> singular_values;  // descending
};

// Gram matrix W^{1/2} (K K*) W^{1/2} on the trapezoid x grid, with the y integral done in closed form.
std::vector<cplx> gram_matrix(const KernelOperator& K, double window, int nodes);
// Eigenvalues of the Gram matrix, clipped at 0, square-rooted, descending.
std::vector<double> singular_values(const KernelOperator& K, double window, int nodes);
TraceNormResult trace_norm_estimate(const KernelOperator& K, bool refine = true, const TraceNormOptions& opts = {});
// Singular values of the windowed Nystrom matrix W^{1/2} K W^{1/2}, y and x on the same grid.
std::vector<double> singular_values_direct(const KernelOperator& K, double window, int nodes);

double analytic_trace_bound(double a, double b);

// 2 sqrt2 exp(-m s cos k) ||S||_k / sqrt((m s/2) cos k (kappa(S) - k))
double sigma(const ScatteringFunction& S, double s, double kappa_value, double strip_norm);
double sigma(const ScatteringFunction& S, double s, double kappa_value);

// Default kappa used by the pipeline: half of kappa(S).
double default_kappa(const ScatteringFunction& S);

struct XiTerms {
  double x = 0.0;
  double value = 0.0;      // may be +inf when only the logarithm is representable
  double log_value = 0.0;  // natural log of value
  int terms = 0;
};

// 1/(1 - x) for x < 1, +inf otherwise.
double distal_series(double x);
// sum_n x^n / sqrt(n!), summed in log space to relative tail < 1e-12.
XiTerms minus_series(double x);

struct DistalBound {
  double sigma = 0.0;
  TraceNormResult trace;
  double x = 0.0;
  double value = 0.0;
};

struct MinusBound {
  double sigma = 0.0;
  double strip_norm = 0.0;
  TraceNormResult trace;
  XiTerms series;
};

DistalBound xi_bound_distal(const ScatteringFunction& S, double s, double kappa_value, const TraceNormOptions& opts = {},
                            bool refine = false);
MinusBound xi_bound_minus(const ScatteringFunction& S, double s, double kappa_value, const TraceNormOptions& opts = {},
                          bool refine = false);

struct SminResult {
  double s_min = 0.0;
  double lo = 0.0, hi = 0.0;  // final bracket
  int iterations = 0;
};

// Root of s -> sigma(s) ||T_{s,kappa}||_1 - 1 by bisection.
SminResult find_s_min(const ScatteringFunction& S, double kappa_value, std::optional<std::pair<double, double>> bracket = {},
                      double tol = 1e-4, const TraceNormOptions& opts = {});

struct BoseBound {
  std::vector<double> sv_phi, sv_pi;
  double max_phi = 0.0, max_pi = 0.0;
  double det_phi = 0.0, det_pi = 0.0;  // prod (1 - t_i)^{-2}
  double value = 0.0;                  // +inf once any t_i >= 1
};

// Unprojected determinant surrogate.
BoseBound free_bose_bound(double s, double mass, const TraceNormOptions& opts = {});
double determinant_bound(const std::vector<double>& sv);

struct FermiBound {
  double trace_phi = 0.0, trace_pi = 0.0;
  double value = 0.0;       // exp(2 ||T_phi||_1 + 2 ||T_pi||_1)
  double det_compare = 0.0; // prod (1 - t_i)^{-2} on the same spectra
};

FermiBound ising_fermi_bound(double s, double mass, const TraceNormOptions& opts = {});

struct PartitionBound {
  double mu = 0.0;
  double s_eff = 0.0;
  double prefactor = 2.0;
  MinusBound xi;
  double log_value = 0.0;
  double value = 0.0;
  bool heuristic = true;
};

PartitionBound partition_bound(const ScatteringFunction& S, double beta, double r, double kappa_value, bool improved,
                               const TraceNormOptions& opts = {});

struct CurvePoint {
  double s = 0.0;
  double sigma = 0.0;
  TraceNormResult trace;
  double x_distal = 0.0;
  double distal = 0.0;
  std::optional<XiTerms> minus;
};

struct NuclearityReport {
  std::string model;
  double kappa = 0.0;
  double strip_norm = 0.0;
  std::vector<CurvePoint> curve;
  std::optional<double> s_min;
};

NuclearityReport nuclearity_curve(const ScatteringFunction& S, double kappa_value, const std::vector<double>& s_values,
                                  bool refine = true, const TraceNormOptions& opts = {});

namespace serial {
std::vector<cplx> gram_matrix(const KernelOperator& K, double window, int nodes);
}  // namespace serial

}  // namespace fsm
