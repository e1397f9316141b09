#pragma once

#include <array>

#include "fsm/fock_space.hpp"

namespace fsm {

// Spacetime test function. Fourier convention:
//   f~(p) = (1/2pi) int d^2x f(x) exp(i p.x),  p.x = p0 x0 - p1 x1.
class TestFunction2D {
 public:
  enum class Kind { gaussian, compact_bump };

  // A exp(-(x-c)^T M (x-c)/2 + i q^T x), M symmetric positive definite.
  static TestFunction2D gaussian(std::array<double, 2> center, double sigma, std::array<double, 2> q = {0.0, 0.0},
                                 cplx amplitude = 1.0);
  static TestFunction2D gaussian(std::array<double, 2> center, std::array<double, 3> precision,
                                 std::array<double, 2> q, cplx amplitude);
  // A b((x0-c0)/h0) b((x1-c1)/h1) with b(u) = exp(-alpha/(1-u^2)) on the box [a0,b0]x[a1,b1].
  static TestFunction2D bump(std::array<double, 4> box, cplx amplitude = 1.0, int order = 64, double alpha = 1.0);

  Kind kind() const { return kind_; }
  cplx amplitude() const { return amp_; }
  const std::array<double, 2>& center() const { return c_; }
  const std::array<double, 3>& precision() const { return prec_; }
  const std::array<double, 2>& modulation() const { return q_; }
  const std::array<double, 4>& box() const { return box_; }
  int order() const { return order_; }
  double alpha() const { return alpha_; }

  cplx value(double x0, double x1) const;
  // f~(p) for complex p; throws OverflowError past the exponent cap.
  cplx fourier(cplx p0, cplx p1) const;

  TestFunction2D scaled(cplx c) const;
  // conj f(-x)
  TestFunction2D star() const;
  // conj f(-x0, x1)
  TestFunction2D time_reflected() const;
  // conj f(x)
  TestFunction2D conjugated() const;
  // f(Lambda(l)^{-1}(y - x)); bumps accept pure translations only.
  TestFunction2D transformed(const PoincareElement& g) const;

  // Support-box corner test against x1 > |x0| (right) and x1 < -|x0| (left).
  bool in_right_wedge() const;
  bool in_left_wedge() const;

  static double exponent_cap;

 private:
  Kind kind_ = Kind::gaussian;
  cplx amp_ = 1.0;
  std::array<double, 2> c_{0.0, 0.0};
  std::array<double, 3> prec_{1.0, 0.0, 1.0};  // M00, M01, M11
  std::array<double, 2> q_{0.0, 0.0};
  std::array<double, 4> box_{0.0, 0.0, 0.0, 0.0};
  int order_ = 64;
  double alpha_ = 1.0;
};

// f^{+-}(zeta) = f~(+-p(zeta)), p(zeta) = m (cosh zeta, sinh zeta).
cplx mass_shell(const TestFunction2D& f, int sign, cplx zeta, double mass);
WaveFunction1 mass_shell_on_grid(const TestFunction2D& f, int sign, const GridPtr& grid, double mass);

// Klein-Gordon symbol m^2 - p^2 with p^2 = p0^2 - p1^2.
cplx klein_gordon_symbol(cplx p0, cplx p1, double mass);

// phi(f) = z+(f+) + z(f-)
FockVector field_phi(const FockSpace& fs, const TestFunction2D& f, const FockVector& Phi);
FockVector field_phi(const FockSpace& fs, const WaveFunction1& fplus, const WaveFunction1& fminus, const FockVector& Phi);
// phi'(f) = J phi(f*) J
FockVector field_phi_prime(const FockSpace& fs, const TestFunction2D& f, const FockVector& Phi);

// One-dimensional time-zero data with unitary transform f~(p) = (2pi)^{-1/2} int f(x) exp(-i p x) dx.
class TestFunction1D {
 public:
  static TestFunction1D gaussian(double center, double sigma, cplx amplitude = 1.0);
  static TestFunction1D bump(double lo, double hi, cplx amplitude = 1.0, int order = 64, double alpha = 1.0);

  cplx value(double x) const;
  cplx fourier(double p) const;
  double l2_norm_squared() const;
  bool is_gaussian() const { return gaussian_; }

 private:
  bool gaussian_ = true;
  cplx amp_ = 1.0;
  double c_ = 0.0, s_ = 1.0;
  double lo_ = 0.0, hi_ = 0.0;
  int order_ = 64;
  double alpha_ = 1.0;
};

enum class TimeZero { varphi, pi };

FockVector timezero_field(const FockSpace& fs, const TestFunction1D& f, TimeZero which, const FockVector& Phi);
// || omega^{1/2} f^ ||^2 = int dtheta m cosh(theta) |f~(m sinh theta)|^2
double omega_norm_squared(const TestFunction1D& f, double mass, double window = 8.0, int panels = 400, int order = 16);

struct WitnessResult {
  Tensor operator_route;  // P2 [phi(f), phi(g)] Omega
  Tensor closed_form;
  double residual = 0.0;  // weighted norm of the difference
};

WitnessResult nonlocality_witness(const FockSpace& fs, const TestFunction2D& f, const TestFunction2D& g);

// Scale f so that its grid restriction f+ has unit norm.
TestFunction2D normalized_on_grid(const TestFunction2D& f, const GridPtr& grid, double mass);

}  // namespace fsm
