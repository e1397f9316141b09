#include "fsm/fields.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "fsm/errors.hpp"
#include "fsm/quadrature.hpp"

namespace fsm {

double TestFunction2D::exponent_cap = 700.0;

namespace {

constexpr cplx I(0.0, 1.0);
constexpr int kMaxBumpOrder = 16384;

double bump_profile(double u, double alpha) {
  const double d = 1.0 - u * u;
  return d > 0.0 ? std::exp(-alpha / d) : 0.0;
}

// Gauss-Legendre weights multiplied by the bump profile, cached per (order, alpha).
const std::vector<double>& weighted_profile(int n, double alpha) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, alpha);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const GaussRule& g = gauss_legendre(n);
  std::vector<double> wp(n);
  for (int i = 0; i < n; ++i) wp[i] = g.w[i] * bump_profile(g.x[i], alpha);
  return cache.emplace(key, std::move(wp)).first->second;
}

// Quadrature order for int_{-1}^{1} b(u) exp(i kappa u) du: the rule must
// resolve both the oscillation and the profile's flat edges.
int bump_order(int base, cplx kappa) {
  const int need = static_cast<int>(std::ceil(1.5 * std::abs(kappa))) + 100;
  const int n = std::max(base, need);
  if (n > kMaxBumpOrder) throw DomainError("bump transform oscillates too fast for the quadrature budget");
  return (n + 31) / 32 * 32;
}

// int_lo^hi b((x-c)/h) exp(i k x) dx
cplx bump_axis(double lo, double hi, cplx k, int base, double alpha) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  const cplx kappa = k * h;
  const int n = bump_order(base, kappa);
  const GaussRule& g = gauss_legendre(n);
  const auto& wp = weighted_profile(n, alpha);
  cplx s = 0.0;
  for (int i = 0; i < n; ++i)
    if (wp[i] != 0.0) s += wp[i] * std::exp(I * kappa * g.x[i]);
  return h * std::exp(I * k * c) * s;
}

// Largest real part of i k x over x in [lo, hi].
double axis_growth(double lo, double hi, cplx k) { return std::max(-k.imag() * lo, -k.imag() * hi); }

}  // namespace

TestFunction2D TestFunction2D::gaussian(std::array<double, 2> center, double sigma, std::array<double, 2> q, cplx amplitude) {
  if (!(sigma > 0.0)) throw DomainError("gaussian width must be positive");
  const double p = 1.0 / (sigma * sigma);
  return gaussian(center, {p, 0.0, p}, q, amplitude);
}

TestFunction2D TestFunction2D::gaussian(std::array<double, 2> center, std::array<double, 3> precision,
                                        std::array<double, 2> q, cplx amplitude) {
  const double det = precision[0] * precision[2] - precision[1] * precision[1];
  if (!(precision[0] > 0.0) || !(det > 0.0)) throw DomainError("gaussian precision matrix must be positive definite");
  TestFunction2D f;
  f.kind_ = Kind::gaussian;
  f.c_ = center;
  f.prec_ = precision;
  f.q_ = q;
  f.amp_ = amplitude;
  return f;
}

TestFunction2D TestFunction2D::bump(std::array<double, 4> box, cplx amplitude, int order, double alpha) {
  if (!(box[1] > box[0]) || !(box[3] > box[2])) throw DomainError("bump box must have positive extent");
  if (order < 2) throw DomainError("bump quadrature order too small");
  if (!(alpha > 0.0)) throw DomainError("bump profile exponent must be positive");
  TestFunction2D f;
  f.kind_ = Kind::compact_bump;
  f.box_ = box;
  f.amp_ = amplitude;
  f.order_ = order;
  f.alpha_ = alpha;
  return f;
}

cplx TestFunction2D::value(double x0, double x1) const {
  if (kind_ == Kind::gaussian) {
    const double d0 = x0 - c_[0], d1 = x1 - c_[1];
    const double quad = prec_[0] * d0 * d0 + 2.0 * prec_[1] * d0 * d1 + prec_[2] * d1 * d1;
    return amp_ * std::exp(-0.5 * quad + I * (q_[0] * x0 + q_[1] * x1));
  }
  const double h0 = 0.5 * (box_[1] - box_[0]), h1 = 0.5 * (box_[3] - box_[2]);
  const double u0 = (x0 - 0.5 * (box_[0] + box_[1])) / h0, u1 = (x1 - 0.5 * (box_[2] + box_[3])) / h1;
  return amp_ * bump_profile(u0, alpha_) * bump_profile(u1, alpha_);
}

cplx TestFunction2D::fourier(cplx p0, cplx p1) const {
  if (kind_ == Kind::gaussian) {
    const cplx k0 = q_[0] + p0, k1 = q_[1] - p1;
    const double det = prec_[0] * prec_[2] - prec_[1] * prec_[1];
    const cplx quad = (prec_[2] * k0 * k0 - 2.0 * prec_[1] * k0 * k1 + prec_[0] * k1 * k1) / det;
    const cplx ex = I * (k0 * c_[0] + k1 * c_[1]) - 0.5 * quad;
    if (ex.real() > exponent_cap) throw OverflowError("gaussian transform exponent exceeds cap");
    return amp_ * std::exp(ex) / std::sqrt(det);
  }
  // exp(i p.x) = exp(i p0 x0) exp(i (-p1) x1)
  const cplx k0 = p0, k1 = -p1;
  if (axis_growth(box_[0], box_[1], k0) + axis_growth(box_[2], box_[3], k1) > exponent_cap)
    throw OverflowError("bump transform exponent exceeds cap");
  return amp_ * bump_axis(box_[0], box_[1], k0, order_, alpha_) * bump_axis(box_[2], box_[3], k1, order_, alpha_) /
         (2.0 * kPi);
}

TestFunction2D TestFunction2D::scaled(cplx c) const {
  TestFunction2D f = *this;
  f.amp_ *= c;
  return f;
}

TestFunction2D TestFunction2D::star() const {
  TestFunction2D f = *this;
  f.amp_ = std::conj(amp_);
  if (kind_ == Kind::gaussian) {
    f.c_ = {-c_[0], -c_[1]};
  } else {
    f.box_ = {-box_[1], -box_[0], -box_[3], -box_[2]};
  }
  return f;
}

TestFunction2D TestFunction2D::time_reflected() const {
  TestFunction2D f = *this;
  f.amp_ = std::conj(amp_);
  if (kind_ == Kind::gaussian) {
    f.c_ = {-c_[0], c_[1]};
    f.prec_ = {prec_[0], -prec_[1], prec_[2]};
    f.q_ = {q_[0], -q_[1]};
  } else {
    f.box_ = {-box_[1], -box_[0], box_[2], box_[3]};
  }
  return f;
}

TestFunction2D TestFunction2D::conjugated() const {
  TestFunction2D f = *this;
  f.amp_ = std::conj(amp_);
  if (kind_ == Kind::gaussian) f.q_ = {-q_[0], -q_[1]};
  return f;
}

TestFunction2D TestFunction2D::transformed(const PoincareElement& g) const {
  TestFunction2D f = *this;
  if (kind_ == Kind::compact_bump) {
    if (g.lambda != 0.0) throw DomainError("bumps support translations only");
    f.box_ = {box_[0] + g.x0, box_[1] + g.x0, box_[2] + g.x1, box_[3] + g.x1};
    return f;
  }
  const double ch = std::cosh(g.lambda), sh = std::sinh(g.lambda);
  // L = Lambda^{-1} = [[ch, -sh], [-sh, ch]], symmetric.
  const double L00 = ch, L01 = -sh, L11 = ch;
  const double M00 = prec_[0], M01 = prec_[1], M11 = prec_[2];
  // L M L
  const double A00 = L00 * M00 + L01 * M01, A01 = L00 * M01 + L01 * M11;
  const double A10 = L01 * M00 + L11 * M01, A11 = L01 * M01 + L11 * M11;
  f.prec_ = {A00 * L00 + A01 * L01, A00 * L01 + A01 * L11, A10 * L01 + A11 * L11};
  f.c_ = {ch * c_[0] + sh * c_[1] + g.x0, sh * c_[0] + ch * c_[1] + g.x1};
  f.q_ = {L00 * q_[0] + L01 * q_[1], L01 * q_[0] + L11 * q_[1]};
  const double qLa = f.q_[0] * g.x0 + f.q_[1] * g.x1;
  f.amp_ = amp_ * std::exp(-I * qLa);
  return f;
}

bool TestFunction2D::in_right_wedge() const {
  if (kind_ != Kind::compact_bump) return false;
  return box_[2] > std::max(std::abs(box_[0]), std::abs(box_[1]));
}

bool TestFunction2D::in_left_wedge() const {
  if (kind_ != Kind::compact_bump) return false;
  return box_[3] < -std::max(std::abs(box_[0]), std::abs(box_[1]));
}

cplx mass_shell(const TestFunction2D& f, int sign, cplx zeta, double mass) {
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  const double s = static_cast<double>(sign);
  return f.fourier(s * mass * std::cosh(zeta), s * mass * std::sinh(zeta));
}

WaveFunction1 mass_shell_on_grid(const TestFunction2D& f, int sign, const GridPtr& grid, double mass) {
  WaveFunction1 w{grid, std::vector<cplx>(grid->count)};
  for (int i = 0; i < grid->count; ++i) w.values[i] = mass_shell(f, sign, grid->nodes[i], mass);
  return w;
}

cplx klein_gordon_symbol(cplx p0, cplx p1, double mass) { return mass * mass - (p0 * p0 - p1 * p1); }

FockVector field_phi(const FockSpace& fs, const WaveFunction1& fplus, const WaveFunction1& fminus, const FockVector& Phi) {
  return create(fs, fplus, Phi) + annihilate(fs, fminus, Phi);
}

FockVector field_phi(const FockSpace& fs, const TestFunction2D& f, const FockVector& Phi) {
  const double m = fs.model().mass();
  return field_phi(fs, mass_shell_on_grid(f, 1, fs.grid_ptr(), m), mass_shell_on_grid(f, -1, fs.grid_ptr(), m), Phi);
}

FockVector field_phi_prime(const FockSpace& fs, const TestFunction2D& f, const FockVector& Phi) {
  return reflect_j(field_phi(fs, f.star(), reflect_j(Phi)));
}

TestFunction1D TestFunction1D::gaussian(double center, double sigma, cplx amplitude) {
  if (!(sigma > 0.0)) throw DomainError("gaussian width must be positive");
  TestFunction1D f;
  f.gaussian_ = true;
  f.c_ = center;
  f.s_ = sigma;
  f.amp_ = amplitude;
  return f;
}

TestFunction1D TestFunction1D::bump(double lo, double hi, cplx amplitude, int order, double alpha) {
  if (!(hi > lo)) throw DomainError("bump interval must have positive length");
  TestFunction1D f;
  f.gaussian_ = false;
  f.lo_ = lo;
  f.hi_ = hi;
  f.amp_ = amplitude;
  f.order_ = order;
  f.alpha_ = alpha;
  return f;
}

cplx TestFunction1D::value(double x) const {
  if (gaussian_) return amp_ * std::exp(-0.5 * (x - c_) * (x - c_) / (s_ * s_));
  const double c = 0.5 * (lo_ + hi_), h = 0.5 * (hi_ - lo_);
  return amp_ * bump_profile((x - c) / h, alpha_);
}

cplx TestFunction1D::fourier(double p) const {
  if (gaussian_) return amp_ * s_ * std::exp(-I * p * c_ - 0.5 * s_ * s_ * p * p);
  return amp_ * bump_axis(lo_, hi_, cplx(-p, 0.0), order_, alpha_) / std::sqrt(2.0 * kPi);
}

double TestFunction1D::l2_norm_squared() const {
  if (gaussian_) return std::norm(amp_) * s_ * std::sqrt(kPi);
  const double h = 0.5 * (hi_ - lo_);
  const GaussRule& g = gauss_legendre(256);
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double b = bump_profile(g.x[i], alpha_);
    s += g.w[i] * b * b;
  }
  return std::norm(amp_) * h * s;
}

FockVector timezero_field(const FockSpace& fs, const TestFunction1D& f, TimeZero which, const FockVector& Phi) {
  const auto& g = fs.grid();
  const double m = fs.model().mass();
  WaveFunction1 fp{fs.grid_ptr(), std::vector<cplx>(g.count)}, fm = fp;
  for (int i = 0; i < g.count; ++i) {
    const double p = m * std::sinh(g.nodes[i]);
    const double w = which == TimeZero::pi ? m * std::cosh(g.nodes[i]) : 1.0;
    fp.values[i] = w * f.fourier(p);
    fm.values[i] = w * f.fourier(-p);
  }
  if (which == TimeZero::varphi) return create(fs, fp, Phi) + annihilate(fs, fm, Phi);
  return I * (create(fs, fp, Phi) - annihilate(fs, fm, Phi));
}

double omega_norm_squared(const TestFunction1D& f, double mass, double window, int panels, int order) {
  return integrate(
      [&](double t) {
        return mass * std::cosh(t) * std::norm(f.fourier(mass * std::sinh(t)));
      },
      -window, window, panels, order);
}

WitnessResult nonlocality_witness(const FockSpace& fs, const TestFunction2D& f, const TestFunction2D& g) {
  const double m = fs.model().mass();
  const auto& grid = fs.grid_ptr();
  const WaveFunction1 fp = mass_shell_on_grid(f, 1, grid, m), fm = mass_shell_on_grid(f, -1, grid, m);
  const WaveFunction1 gp = mass_shell_on_grid(g, 1, grid, m), gm = mass_shell_on_grid(g, -1, grid, m);
  const FockVector omega = FockVector::vacuum(grid, 0);
  const FockVector comm = field_phi(fs, fp, fm, field_phi(fs, gp, gm, omega)) - field_phi(fs, gp, gm, field_phi(fs, fp, fm, omega));
  WitnessResult r;
  r.operator_route = symmetrize(fs, comm.component(2));
  const int N = fs.nodes();
  r.closed_form = Tensor{2, std::vector<cplx>(static_cast<std::size_t>(N) * N)};
  const double c = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      const cplx anti = fp.values[a] * gp.values[b] - gp.values[a] * fp.values[b];
      r.closed_form.data[static_cast<std::size_t>(a) * N + b] = c * anti * (1.0 - fs.s(b, a));
    }
  Tensor d = r.operator_route;
  for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] -= r.closed_form.data[i];
  r.residual = norm(d, fs.grid());
  return r;
}

TestFunction2D normalized_on_grid(const TestFunction2D& f, const GridPtr& grid, double mass) {
  const double n = mass_shell_on_grid(f, 1, grid, mass).norm();
  if (!(n > 0.0)) throw DomainError("test function has vanishing mass-shell restriction");
  return f.scaled(1.0 / n);
}

}  // namespace fsm
