#include "fsm/wedge_locality.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "fsm/errors.hpp"
#include "fsm/quadrature.hpp"

namespace fsm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double relative(cplx num, cplx a, cplx b) {
  return std::abs(num) / std::max({std::abs(a), std::abs(b), kResidualFloor});
}

}  // namespace

CommutatorIntegrand::CommutatorIntegrand(const Integrand& psi1, const Integrand& psi2, double shift,
                                         const WedgeQuadrature& q)
    : shift_(shift) {
  if (!(q.window > 0.0) || q.panels < 1 || q.order < 1) throw DomainError("invalid wedge quadrature");
  const CompositeRule r = composite_gauss(-q.window, q.window, q.panels, q.order);
  x_ = r.x;
  w_ = r.w;
  f_.resize(x_.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < x_.size(); ++i) {
    try {
      const cplx z(x_[i], shift);
      f_[i] = psi1(z) * psi2(z);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  for (std::size_t i = 0; i < x_.size(); ++i) abs_mass_ += w_[i] * std::abs(f_[i]);
  tail_ = std::max(std::abs(f_.front()), std::abs(f_.back()));
  if (tail_ > q.tail_tol * std::max(abs_mass_, std::numeric_limits<double>::min()))
    throw ConvergenceError("commutator integrand has not decayed at the window edge");
}

cplx integrate_commutator(const ScatteringFunction& S, const CommutatorIntegrand& F, CommutatorKind kind,
                          const std::vector<double>& thetas) {
  const auto& x = F.nodes();
  const auto& w = F.weights();
  const auto& f = F.values();
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (f[i] == 0.0) continue;
    const cplx z(x[i], F.shift());
    cplx prod = 1.0;
    for (double t : thetas) prod *= kind == CommutatorKind::B ? S(z - t) : S(t - z);
    s += w[i] * f[i] * prod;
  }
  return kind == CommutatorKind::B ? s : -s;
}

cplx eval_b(const ScatteringFunction& S, const Integrand& psi1, const Integrand& psi2, const std::vector<double>& thetas,
            const WedgeQuadrature& q) {
  return integrate_commutator(S, CommutatorIntegrand(psi1, psi2, 0.0, q), CommutatorKind::B, thetas);
}

cplx eval_c(const ScatteringFunction& S, const Integrand& psi1, const Integrand& psi2, const std::vector<double>& thetas,
            const WedgeQuadrature& q) {
  return integrate_commutator(S, CommutatorIntegrand(psi1, psi2, 0.0, q), CommutatorKind::C, thetas);
}

ContourData prepare_contour(const TestFunction2D& f, const TestFunction2D& g, double mass, const WedgeQuadrature& q,
                            bool require_wedges) {
  if (require_wedges && !(f.in_right_wedge() && g.in_left_wedge()))
    throw SupportError("contour identity needs f in the right wedge and g in the left wedge");
  auto shell = [mass](const TestFunction2D& h, int sign) {
    return Integrand([&h, sign, mass](cplx z) { return mass_shell(h, sign, z, mass); });
  };
  ContourData d;
  d.b_real = CommutatorIntegrand(shell(f, -1), shell(g, 1), 0.0, q);
  d.c_real = CommutatorIntegrand(shell(f, 1), shell(g, -1), 0.0, q);
  // Off the real line the transforms only stay bounded under the wedge condition.
  if (f.in_right_wedge() && g.in_left_wedge()) {
    d.b_pi = CommutatorIntegrand(shell(f, -1), shell(g, 1), kPi, q);
    d.b_half = CommutatorIntegrand(shell(f, -1), shell(g, 1), 0.5 * kPi, q);
  }
  return d;
}

ContourReport verify_contour_identity(const ScatteringFunction& S, const ContourData& data,
                                      const std::vector<std::vector<double>>& spectators, double tol) {
  if (!S.bounded_class()) throw DomainError("contour identity needs a = 0");
  ContourReport rep;
  rep.tol = tol;
  rep.samples.resize(spectators.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < spectators.size(); ++k) {
    ContourSample& s = rep.samples[k];
    s.thetas = spectators[k];
    s.n = static_cast<int>(s.thetas.size());
    s.b = integrate_commutator(S, data.b_real, CommutatorKind::B, s.thetas);
    s.c = integrate_commutator(S, data.c_real, CommutatorKind::C, s.thetas);
    s.residual = relative(s.b + s.c, s.b, s.c);
    if (data.b_pi.nodes().empty()) {
      s.shift_residual = std::numeric_limits<double>::infinity();
    } else {
      s.b_pi = integrate_commutator(S, data.b_pi, CommutatorKind::B, s.thetas);
      s.b_half = integrate_commutator(S, data.b_half, CommutatorKind::B, s.thetas);
      s.shift_residual = std::max(relative(s.b_pi - s.b, s.b, s.c), relative(s.b_half - s.b, s.b, s.c));
    }
    s.floor = 64.0 * kEps * std::max(data.b_real.abs_mass(), data.c_real.abs_mass()) /
              std::max({std::abs(s.b), std::abs(s.c), kResidualFloor});
  }
  for (const auto& s : rep.samples) {
    rep.max_residual = std::max(rep.max_residual, s.residual);
    rep.max_shift_residual = std::max(rep.max_shift_residual, s.shift_residual);
    rep.max_floor = std::max(rep.max_floor, s.floor);
  }
  rep.pass = rep.max_residual <= tol && rep.max_shift_residual <= tol;
  return rep;
}

std::vector<std::vector<double>> spectator_samples(int n, int count, Rng& rng, double spread) {
  if (n < 0 || count < 1) throw DomainError("invalid spectator sampling");
  std::vector<std::vector<double>> out(count, std::vector<double>(n));
  for (auto& t : out)
    for (auto& x : t) x = spread * (2.0 * rng.uniform() - 1.0);
  return out;
}

ContourReport verify_contour_identity(const ScatteringFunction& S, const TestFunction2D& f, const TestFunction2D& g, int n,
                                      int samples, Rng& rng, double tol, const WedgeQuadrature& q) {
  const ContourData d = prepare_contour(f, g, S.mass(), q);
  return verify_contour_identity(S, d, spectator_samples(n, samples, rng), tol);
}

std::vector<RefinementStep> contour_refinement_study(const ScatteringFunction& S, const TestFunction2D& f,
                                                     const TestFunction2D& g,
                                                     const std::vector<std::vector<double>>& spectators,
                                                     const std::vector<int>& orders, WedgeQuadrature base) {
  std::vector<RefinementStep> out;
  base.tail_tol = std::numeric_limits<double>::infinity();  // coarse rules are judged by the residual alone
  for (int o : orders) {
    base.order = o;
    const ContourReport r = verify_contour_identity(S, prepare_contour(f, g, S.mass(), base), spectators, 1.0);
    out.push_back({o, r.max_residual, r.max_floor});
  }
  return out;
}

bool refinement_converges(const std::vector<RefinementStep>& steps, double factor, double floor_margin) {
  for (std::size_t k = 1; k < steps.size(); ++k) {
    const double prev = steps[k - 1].residual, cur = steps[k].residual;
    const double floor = floor_margin * std::max(steps[k].floor, kEps);
    if (prev <= floor_margin * std::max(steps[k - 1].floor, kEps)) {
      if (cur > floor) return false;  // left the floor again
      continue;
    }
    if (cur > prev / factor && cur > floor) return false;
  }
  return true;
}

FockVector commutator_multiplier(const FockSpace& fs, const WaveFunction1& fminus, const WaveFunction1& fplus,
                                 const WaveFunction1& gplus, const WaveFunction1& gminus, const FockVector& Phi) {
  const int N = fs.nodes();
  const auto& w = fs.grid().weights;
  std::vector<cplx> bw(N), cw(N);
  for (int i = 0; i < N; ++i) {
    bw[i] = w[i] * fminus.values[i] * gplus.values[i];
    cw[i] = w[i] * fplus.values[i] * gminus.values[i];
  }
  FockVector out(Phi.grid_ptr(), Phi.n_max());
  for (int n = 0; n <= Phi.n_max(); ++n) {
    const auto& src = Phi.component(n).data;
    auto& dst = out.component(n).data;
    const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t o = 0; o < size; ++o) {
      std::vector<int> d(n);
      std::size_t r = static_cast<std::size_t>(o);
      for (int k = n - 1; k >= 0; --k) {
        d[k] = static_cast<int>(r % N);
        r /= N;
      }
      cplx acc = 0.0;
      for (int i = 0; i < N; ++i) {
        cplx pb = bw[i], pc = cw[i];
        for (int k = 0; k < n; ++k) {
          pb *= fs.s(i, d[k]);
          pc *= fs.s(d[k], i);
        }
        acc += pb - pc;
      }
      dst[o] = acc * src[o];
    }
  }
  return out;
}

CommutatorReport verify_operator_commutator(const FockSpace& fs, const TestFunction2D& f, const TestFunction2D& g,
                                            const FockVector& Phi, double tol, bool require_wedges) {
  if (require_wedges && !(f.in_right_wedge() && g.in_left_wedge()))
    throw SupportError("operator commutator needs f in the right wedge and g in the left wedge");
  const double m = fs.model().mass();
  const auto& grid = fs.grid_ptr();
  const WaveFunction1 gp = mass_shell_on_grid(g, 1, grid, m), gm = mass_shell_on_grid(g, -1, grid, m);
  const FockVector lhs = field_phi_prime(fs, f, field_phi(fs, gp, gm, Phi));
  const FockVector rhs = field_phi(fs, gp, gm, field_phi_prime(fs, f, Phi));
  const FockVector comm = lhs - rhs;
  const FockVector mult = commutator_multiplier(fs, mass_shell_on_grid(f, -1, grid, m), mass_shell_on_grid(f, 1, grid, m),
                                                gp, gm, Phi);
  const double nphi = norm(Phi);
  if (!(nphi > 0.0)) throw DomainError("commutator test vector must be nonzero");
  CommutatorReport r;
  r.tol = tol;
  r.residual = norm(comm) / nphi;
  r.multiplier_gap = norm(comm - mult) / nphi;
  r.pass = r.residual <= tol;
  return r;
}

}  // namespace fsm
