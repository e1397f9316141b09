#pragma once

#include <functional>
#include <vector>

#include "fsm/fields.hpp"

namespace fsm {

// Composite Gauss-Legendre rule on [-window, window].
struct WedgeQuadrature {
  double window = 8.0;
  int panels = 512;
  int order = 16;
  double tail_tol = 1e-10;  // endpoint magnitude relative to int |F|
};

using Integrand = std::function<cplx(cplx)>;

// psi1(theta + i shift) psi2(theta + i shift) at the rule's nodes.
class CommutatorIntegrand {
 public:
  CommutatorIntegrand() = default;
  CommutatorIntegrand(const Integrand& psi1, const Integrand& psi2, double shift, const WedgeQuadrature& q);

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<cplx>& values() const { return f_; }
  double shift() const { return shift_; }
  double tail() const { return tail_; }
  double abs_mass() const { return abs_mass_; }  // sum w |F|

 private:
  std::vector<double> x_, w_;
  std::vector<cplx> f_;
  double shift_ = 0.0;
  double tail_ = 0.0;
  double abs_mass_ = 0.0;
};

enum class CommutatorKind { B, C };

// B: + sum w F prod_j S(theta + i shift - theta_j)
// C: - sum w F prod_j S(theta_j - theta - i shift)
cplx integrate_commutator(const ScatteringFunction& S, const CommutatorIntegrand& F, CommutatorKind kind,
                          const std::vector<double>& thetas);

cplx eval_b(const ScatteringFunction& S, const Integrand& psi1, const Integrand& psi2, const std::vector<double>& thetas,
            const WedgeQuadrature& q = {});
cplx eval_c(const ScatteringFunction& S, const Integrand& psi1, const Integrand& psi2, const std::vector<double>& thetas,
            const WedgeQuadrature& q = {});

// Mass-shell integrands for the pair (f, g), shared across models and spectator counts.
struct ContourData {
  CommutatorIntegrand b_real;  // f- g+ on the real line
  CommutatorIntegrand c_real;  // f+ g- on the real line
  CommutatorIntegrand b_pi;    // f- g+ on theta + i pi
  CommutatorIntegrand b_half;  // f- g+ on theta + i pi/2
  // b_pi and b_half stay empty unless f and g sit in opposite wedges.
};

ContourData prepare_contour(const TestFunction2D& f, const TestFunction2D& g, double mass, const WedgeQuadrature& q = {},
                            bool require_wedges = true);

struct ContourSample {
  int n = 0;
  std::vector<double> thetas;
  cplx b, c, b_pi, b_half;
  double residual = 0.0;        // |B + C| / max(|B|, |C|, 1e-14)
  double shift_residual = 0.0;  // max of |I_pi - B|, |I_half - B| over the same denominator
  double floor = 0.0;           // roundoff level of the relative residual
};

struct ContourReport {
  std::vector<ContourSample> samples;
  double max_residual = 0.0;
  double max_shift_residual = 0.0;
  double max_floor = 0.0;
  double tol = 0.0;
  bool pass = false;
};

inline constexpr double kResidualFloor = 1e-14;

ContourReport verify_contour_identity(const ScatteringFunction& S, const ContourData& data,
                                      const std::vector<std::vector<double>>& spectators, double tol);
ContourReport verify_contour_identity(const ScatteringFunction& S, const TestFunction2D& f, const TestFunction2D& g, int n,
                                      int samples, Rng& rng, double tol, const WedgeQuadrature& q = {});

// Uniform spectator tuples in [-spread, spread]^n.
std::vector<std::vector<double>> spectator_samples(int n, int count, Rng& rng, double spread = 2.0);

struct RefinementStep {
  int order = 0;
  double residual = 0.0;
  double floor = 0.0;
};

// Max relative contour residual for each Gauss-Legendre order per panel.
std::vector<RefinementStep> contour_refinement_study(const ScatteringFunction& S, const TestFunction2D& f,
                                                     const TestFunction2D& g,
                                                     const std::vector<std::vector<double>>& spectators,
                                                     const std::vector<int>& orders,
                                                     WedgeQuadrature base = {8.0, 64, 16, 1e-10});

// True when every step either drops at least `factor` below its predecessor or sits at the floor.
bool refinement_converges(const std::vector<RefinementStep>& steps, double factor = 10.0, double floor_margin = 10.0);

// Grid-sum multiplier (B + C) applied to Phi.
FockVector commutator_multiplier(const FockSpace& fs, const WaveFunction1& fminus, const WaveFunction1& fplus,
                                 const WaveFunction1& gplus, const WaveFunction1& gminus, const FockVector& Phi);

struct CommutatorReport {
  double residual = 0.0;        // ||[phi'(f), phi(g)] Phi|| / ||Phi||
  double multiplier_gap = 0.0;  // || operator route - multiplier route || / ||Phi||
  double tol = 0.0;
  bool pass = false;
};

CommutatorReport verify_operator_commutator(const FockSpace& fs, const TestFunction2D& f, const TestFunction2D& g,
                                            const FockVector& Phi, double tol, bool require_wedges = true);

}  // namespace fsm
