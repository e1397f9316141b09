#include "fsm/scattering_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fsm/errors.hpp"

namespace fsm {

namespace {

constexpr double kMirrorTol = 1e-12;

bool is_partner(cplx a, cplx b) { return std::abs(b - cplx(-a.real(), a.imag())) <= kMirrorTol; }

double golden_max(const auto& f, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace

ScatteringFunction build_model(int epsilon, double a, std::vector<cplx> zeros, double mass,
                               const ModelOptions& opts) {
  if (epsilon != 1 && epsilon != -1) throw DomainError("epsilon must be +1 or -1");
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("a must be finite and nonnegative");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
  if (!(opts.pole_floor >= 0.0)) throw DomainError("pole floor must be nonnegative");
  for (const cplx& b : zeros) {
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag()))
      throw DomainError("zero is not finite");
    if (b.imag() <= 0.0 || b.imag() > kPi / 2)
      throw DomainError("zero imaginary part must lie in (0, pi/2]");
  }

  ScatteringFunction S;
  std::vector<bool> used(zeros.size(), false);
  std::vector<cplx> extra;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (used[i] || zeros[i].real() == 0.0) continue;
    used[i] = true;
    bool found = false;
    for (std::size_t j = 0; j < zeros.size(); ++j) {
      if (!used[j] && is_partner(zeros[i], zeros[j])) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (found) continue;
    if (opts.auto_mirror) {
      extra.emplace_back(-zeros[i].real(), zeros[i].imag());
    } else if (opts.enforce_mirror) {
      std::ostringstream os;
      os << "zero " << zeros[i] << " has no mirror partner";
      throw DomainError(os.str());
    } else {
      S.mirror_consistent_ = false;
    }
  }
  zeros.insert(zeros.end(), extra.begin(), extra.end());

  S.epsilon_ = epsilon;
  S.a_ = a;
  S.mass_ = mass;
  S.zeros_ = std::move(zeros);
  S.pole_floor_ = opts.pole_floor;
  S.sinh_zeros_.reserve(S.zeros_.size());
  for (const cplx& b : S.zeros_) S.sinh_zeros_.push_back(std::sinh(b));
  return S;
}

ScatteringFunction ScatteringFunction::with_mass(double m) const {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  ScatteringFunction S = *this;
  S.mass_ = m;
  return S;
}

cplx ScatteringFunction::operator()(cplx zeta) const {
  const cplx sz = std::sinh(zeta);
  cplx v(static_cast<double>(epsilon_), 0.0);
  if (a_ != 0.0) v *= std::exp(cplx(0.0, a_) * sz);
  for (const cplx& sb : sinh_zeros_) {
    const cplx den = sb + sz;
    if (std::abs(den) < pole_floor_) {
      std::ostringstream os;
      os << "evaluation at " << zeta << " is within the pole floor";
      throw PoleError(os.str());
    }
    v *= (sb - sz) / den;
  }
  return v;
}

ScatteringFunction free_model(double mass) { return build_model(1, 0.0, {}, mass); }
ScatteringFunction ising_model(double mass) { return build_model(-1, 0.0, {}, mass); }

ScatteringFunction sinh_gordon(double B, double mass) {
  if (!(B > 0.0 && B < 1.0)) throw DomainError("Sinh-Gordon coupling must lie in (0, 1)");
  return build_model(-1, 0.0, {cplx(0.0, std::asin(std::sin(kPi * B)))}, mass);
}

ScatteringFunction single_zero(int epsilon, double theta0, double mass) {
  return build_model(epsilon, 0.0, {cplx(0.0, theta0)}, mass);
}

cplx evaluate(const ScatteringFunction& S, cplx zeta) { return S(zeta); }

double RelationReport::max_residual() const {
  return std::max({conj_inverse, reflection, crossing, modulus});
}

RelationReport verify_relations(const ScatteringFunction& S, const std::vector<double>& thetas, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  RelationReport r;
  r.tol = tol;
  for (double t : thetas) {
    const cplx s = S(t);
    const cplx inv = 1.0 / s;
    r.conj_inverse = std::max(r.conj_inverse, std::abs(std::conj(s) - inv));
    r.reflection = std::max(r.reflection, std::abs(S(-t) - inv));
    r.crossing = std::max(r.crossing, std::abs(S(cplx(t, kPi)) - inv));
    r.modulus = std::max(r.modulus, std::abs(std::abs(s) - 1.0));
  }
  r.pass = r.max_residual() <= tol;
  return r;
}

double kappa(const ScatteringFunction& S) {
  double k = kPi / 2;
  for (const cplx& b : S.zeros()) k = std::min(k, b.imag());
  return k;
}

double strip_sup_norm(const ScatteringFunction& S, double kappa_value, const StripNormOptions& opts) {
  if (!(kappa_value > 0.0 && kappa_value < kappa(S))) throw DomainError("kappa outside (0, kappa(S))");
  if (opts.samples < 3 || !(opts.window > 0.0)) throw DomainError("invalid strip norm sampling");
  if (S.a() != 0.0) return std::numeric_limits<double>::infinity();
  // S(t + i pi + i k) = S(-t - i k): both boundary lines give the same supremum.
  auto f = [&](double t) { return std::abs(S(cplx(t, -kappa_value))); };
  const int n = opts.samples;
  const double h = 2.0 * opts.window / (n - 1);
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = f(-opts.window + i * h);
  double best = 1.0;
  for (int i = 0; i < n; ++i) {
    best = std::max(best, v[i]);
    const bool peak = (i == 0 || v[i] >= v[i - 1]) && (i == n - 1 || v[i] >= v[i + 1]);
    if (!peak) continue;
    const double lo = -opts.window + std::max(i - 1, 0) * h;
    const double hi = -opts.window + std::min(i + 1, n - 1) * h;
    best = std::max(best, golden_max(f, lo, hi, opts.refine_tol));
  }
  return best;
}

StripNormCache strip_norm_cache(const ScatteringFunction& S, double kappa_value, const StripNormOptions& opts) {
  return {kappa_value, strip_sup_norm(S, kappa_value, opts)};
}

namespace {

// Accumulates (1/2i) Log(S(z1)/S(z0)) along a straight segment.
cplx track_segment(const ScatteringFunction& S, cplx from, cplx to) {
  const double len = std::abs(to - from);
  if (len == 0.0) return 0.0;
  const cplx dir = (to - from) / len;
  const double hmax = 0.05;
  const double fd = 1e-6;
  cplx acc = 0.0;
  double t = 0.0;
  cplx z = from;
  cplx sz = S(z);
  while (t < len) {
    const cplx dlog = (S(z + fd * dir) - S(z - fd * dir)) / (2.0 * fd * sz);
    double h = std::min(hmax, 0.05 / std::max(std::abs(dlog), 1e-300));
    h = std::min(h, len - t);
    for (;;) {
      const cplx zn = (t + h >= len) ? to : z + h * dir;
      const cplx sn = S(zn);
      const cplx step = std::log(sn / sz);
      if (std::abs(step) < 0.5 || h < 1e-12) {
        acc += step;
        z = zn;
        sz = sn;
        t += h;
        break;
      }
      h *= 0.5;
    }
  }
  return acc / cplx(0.0, 2.0);
}

}  // namespace

cplx phase_shift(const ScatteringFunction& S, cplx zeta) {
  if (!(std::abs(zeta.imag()) < kappa(S))) throw DomainError("phase shift argument outside the analyticity strip");
  const cplx mid(zeta.real(), 0.0);
  return track_segment(S, 0.0, mid) + track_segment(S, mid, zeta);
}

cplx y_phase(const ScatteringFunction& S, int sign, const std::vector<cplx>& zetas) {
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  const double k = kappa(S);
  cplx v = 1.0;
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    for (std::size_t j = i + 1; j < zetas.size(); ++j) {
      const cplx d = zetas[i] - zetas[j];
      if (!(std::abs(d.imag()) < k)) throw DomainError("rapidity difference outside the analyticity strip");
      v *= static_cast<double>(sign) * std::exp(cplx(0.0, 1.0) * phase_shift(S, d));
    }
  }
  return v;
}

std::string describe(const ScatteringFunction& S) {
  std::ostringstream os;
  os.precision(17);
  os << "epsilon=" << S.epsilon() << " a=" << S.a() << " mass=" << S.mass() << " zeros=[";
  for (std::size_t i = 0; i < S.zeros().size(); ++i) {
    if (i) os << ", ";
    os << S.zeros()[i].real() << "+" << S.zeros()[i].imag() << "i";
  }
  os << "]";
  return os.str();
}

}  // namespace fsm
