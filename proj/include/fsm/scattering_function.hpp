#pragma once

#include <complex>
#include <string>
#include <vector>

namespace fsm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct ModelOptions {
  bool auto_mirror = true;     // append -conj(beta) for unmatched zeros off the imaginary axis
  bool enforce_mirror = true;  // reject unmatched zeros when auto_mirror is off
  double pole_floor = 1e-12;   // minimum |sinh beta_k + sinh zeta|
};

// S(zeta) = eps * exp(i a sinh zeta) * prod_k (sinh b_k - sinh zeta) / (sinh b_k + sinh zeta)
class ScatteringFunction {
 public:
  ScatteringFunction() = default;

  int epsilon() const { return epsilon_; }
  double a() const { return a_; }
  double mass() const { return mass_; }
  const std::vector<cplx>& zeros() const { return zeros_; }
  double pole_floor() const { return pole_floor_; }
  // False when built with enforce_mirror off and an unmatched zero is present.
  bool mirror_consistent() const { return mirror_consistent_; }

  cplx operator()(cplx zeta) const;
  cplx operator()(double theta) const { return (*this)(cplx(theta, 0.0)); }

  // Member of the bounded subfamily: a = 0 and finitely many zeros.
  bool bounded_class() const { return a_ == 0.0; }
  bool minus_class() const { return bounded_class() && epsilon_ == -1; }

  ScatteringFunction with_mass(double m) const;

 private:
  friend ScatteringFunction build_model(int, double, std::vector<cplx>, double, const ModelOptions&);
  int epsilon_ = 1;
  double a_ = 0.0;
  double mass_ = 1.0;
  std::vector<cplx> zeros_;
  std::vector<cplx> sinh_zeros_;
  double pole_floor_ = 1e-12;
  bool mirror_consistent_ = true;
};

ScatteringFunction build_model(int epsilon, double a, std::vector<cplx> zeros, double mass,
                               const ModelOptions& opts = {});

// Named catalogue members.
ScatteringFunction free_model(double mass = 1.0);
ScatteringFunction ising_model(double mass = 1.0);
// Sinh-Gordon with coupling B in (0, 1): zero at i*arcsin(sin(pi B)).
ScatteringFunction sinh_gordon(double B, double mass = 1.0);
// Single zero at i*theta0 on the imaginary axis.
ScatteringFunction single_zero(int epsilon, double theta0, double mass = 1.0);

cplx evaluate(const ScatteringFunction& S, cplx zeta);

struct RelationReport {
  double conj_inverse = 0.0;   // max |conj S(t) - 1/S(t)|
  double reflection = 0.0;     // max |S(-t) - 1/S(t)|
  double crossing = 0.0;       // max |S(t + i pi) - 1/S(t)|
  double modulus = 0.0;        // max ||S(t)| - 1|
  double tol = 0.0;
  bool pass = false;
  double max_residual() const;
};

RelationReport verify_relations(const ScatteringFunction& S, const std::vector<double>& thetas, double tol);

double kappa(const ScatteringFunction& S);

struct StripNormOptions {
  double window = 30.0;
  int samples = 10000;
  double refine_tol = 1e-13;
};

// sup |S| over the strip -kappa <= Im zeta <= pi + kappa.
double strip_sup_norm(const ScatteringFunction& S, double kappa_value, const StripNormOptions& opts = {});

struct StripNormCache {
  double kappa;
  double sup_norm;
};

StripNormCache strip_norm_cache(const ScatteringFunction& S, double kappa_value,
                                const StripNormOptions& opts = {});

// delta with S(zeta) = S(0) exp(2 i delta(zeta)), tracked along 0 -> Re zeta -> zeta.
cplx phase_shift(const ScatteringFunction& S, cplx zeta);

// prod_{k<l} (sign * exp(i delta(zeta_k - zeta_l)))
cplx y_phase(const ScatteringFunction& S, int sign, const std::vector<cplx>& zetas);

std::string describe(const ScatteringFunction& S);

}  // namespace fsm
