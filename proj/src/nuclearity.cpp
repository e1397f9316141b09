#include "fsm/nuclearity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fsm/errors.hpp"

namespace fsm {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double kInf = std::numeric_limits<double>::infinity();

// int_R dy / ((y - p)(y - q))
cplx pair_integral(cplx p, cplx q) {
  if (p.imag() > 0.0 && q.imag() < 0.0) return 2.0 * kPi * I / (p - q);
  if (q.imag() > 0.0 && p.imag() < 0.0) return 2.0 * kPi * I / (q - p);
  return 0.0;
}

struct Grid1 {
  std::vector<double> x, w;
};

Grid1 trapezoid(double L, int M) {
  if (!(L > 0.0) || M < 3) throw DomainError("invalid Nystrom grid");
  Grid1 g;
  g.x.resize(M);
  g.w.assign(M, 2.0 * L / (M - 1));
  for (int i = 0; i < M; ++i) g.x[i] = -L + 2.0 * L * i / (M - 1);
  g.w.front() *= 0.5;
  g.w.back() *= 0.5;
  return g;
}

cplx gram_entry(const KernelOperator& K, const Grid1& g, std::size_t i, std::size_t j) {
  const double ei = std::exp(-K.damping * std::cosh(g.x[i])), ej = std::exp(-K.damping * std::cosh(g.x[j]));
  const double scale = std::sqrt(g.w[i] * g.w[j]) * ei * ej;
  if (scale == 0.0) return 0.0;
  cplx s = 0.0;
  for (const auto& tj : K.terms) {
    const cplx p(tj.alpha * g.x[i], tj.beta);
    for (const auto& tk : K.terms) {
      const cplx q(tk.alpha * g.x[j], -tk.beta);
      s += tj.c * std::conj(tk.c) * pair_integral(p, q);
    }
  }
  return scale * s;
}

double trace_norm_of(const std::vector<double>& sv) {
  double t = 0.0;
  // ascending order keeps the sum insensitive to the tail's rounding
  for (auto it = sv.rbegin(); it != sv.rend(); ++it) t += *it;
  return t;
}

}  // namespace

KernelOperator KernelOperator::general(double a, double b) {
  if (!(a > 0.0)) throw DomainError("kernel damping a must be positive");
  if (b == 0.0 || !std::isfinite(b)) throw DomainError("kernel shift b must be nonzero");
  return {KernelKind::general, a, {{cplx(-1.0, 0.0), 1.0, b}}};
}

KernelOperator KernelOperator::modular(double s, double kappa_value, double mass) {
  if (!(s > 0.0) || !(mass > 0.0)) throw DomainError("modular kernel needs s > 0 and m > 0");
  if (!(kappa_value > 0.0)) throw DomainError("modular kernel needs kappa > 0");
  return {KernelKind::modular, 0.5 * mass * s, {{1.0 / (I * kPi), 1.0, 0.5 * kappa_value}}};
}

KernelOperator KernelOperator::bose_phi(double s, double mass) {
  if (!(s > 0.0) || !(mass > 0.0)) throw DomainError("Bose kernel needs s > 0 and m > 0");
  const cplx c = -1.0 / (2.0 * kPi * I);
  return {KernelKind::bose_phi, s * mass, {{c, -1.0, -0.5 * kPi}, {c, 1.0, -0.5 * kPi}}};
}

KernelOperator KernelOperator::bose_pi(double s, double mass) {
  if (!(s > 0.0) || !(mass > 0.0)) throw DomainError("Bose kernel needs s > 0 and m > 0");
  const cplx c = 1.0 / (2.0 * kPi * I);
  return {KernelKind::bose_pi, s * mass, {{c, -1.0, -0.5 * kPi}, {-c, 1.0, -0.5 * kPi}}};
}

cplx KernelOperator::operator()(double x, double y) const {
  cplx s = 0.0;
  for (const auto& t : terms) s += t.c / (y - cplx(t.alpha * x, t.beta));
  return std::exp(-damping * std::cosh(x)) * s;
}

std::string KernelOperator::name() const {
  switch (kind) {
    case KernelKind::general: return "T_general";
    case KernelKind::modular: return "T_modular";
    case KernelKind::bose_phi: return "T_bose_phi";
    case KernelKind::bose_pi: return "T_bose_pi";
  }
  return "unknown";
}

std::vector<cplx> gram_matrix(const KernelOperator& K, double window, int nodes) {
  const Grid1 g = trapezoid(window, nodes);
  const std::size_t M = g.x.size();
  std::vector<cplx> G(M * M);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = i; j < M; ++j) {
      const cplx v = gram_entry(K, g, i, j);
      G[i * M + j] = v;
      G[j * M + i] = std::conj(v);
    }
  return G;
}

namespace serial {
std::vector<cplx> gram_matrix(const KernelOperator& K, double window, int nodes) {
  const Grid1 g = trapezoid(window, nodes);
  const std::size_t M = g.x.size();
  std::vector<cplx> G(M * M);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) G[i * M + j] = gram_entry(K, g, i, j);
  return G;
}
}  // namespace serial

std::vector<double> singular_values(const KernelOperator& K, double window, int nodes) {
  const std::vector<cplx> G = gram_matrix(K, window, nodes);
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(G.data(), nodes, nodes);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("Gram eigensolver failed");
  std::vector<double> sv(nodes);
  for (int i = 0; i < nodes; ++i) sv[i] = std::sqrt(std::max(es.eigenvalues()[i], 0.0));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::vector<double> singular_values_direct(const KernelOperator& K, double window, int nodes) {
  const Grid1 g = trapezoid(window, nodes);
  Eigen::MatrixXcd A(nodes, nodes);
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j) A(i, j) = std::sqrt(g.w[i] * g.w[j]) * K(g.x[i], g.x[j]);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
  std::vector<double> sv(svd.singularValues().data(), svd.singularValues().data() + nodes);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

TraceNormResult trace_norm_estimate(const KernelOperator& K, bool refine, const TraceNormOptions& opts) {
  if (!(K.damping > 0.0)) throw DomainError("trace norm needs positive exponential damping");
  TraceNormResult r;
  double L = opts.window;
  int M = opts.nodes;
  r.singular_values = singular_values(K, L, M);
  r.value = trace_norm_of(r.singular_values);
  r.window = L;
  r.nodes = M;
  if (!refine) return r;
  r.converged = false;
  for (int k = 0; k < opts.max_refinements; ++k) {
    L *= 2.0;
    M *= 2;
    std::vector<double> sv = singular_values(K, L, M);
    const double v = trace_norm_of(sv);
    r.rel_change = std::abs(v - r.value) / std::max(std::abs(v), std::numeric_limits<double>::min());
    r.value = v;
    r.singular_values = std::move(sv);
    r.window = L;
    r.nodes = M;
    r.refinements = k + 1;
    if (r.rel_change < opts.rel_tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

double analytic_trace_bound(double a, double b) {
  if (!(a > 0.0)) throw DomainError("trace bound needs a > 0");
  if (b == 0.0 || !std::isfinite(b)) throw DomainError("trace bound needs b != 0");
  const double B = std::abs(b);
  const double b2 = B * B;
  return std::pow(2.0, 0.25) * std::pow(kPi, 0.75) * std::exp(-a) / std::pow(a, 0.25) *
         std::sqrt(std::sqrt(kPi / 2.0) + 1.0 / (4.0 * a)) * std::sqrt((b2 * b2 + 4.0 * b2 + 24.0) / std::pow(B, 5));
}

double sigma(const ScatteringFunction& S, double s, double kappa_value, double strip_norm) {
  if (!S.bounded_class()) throw DomainError("sigma needs a = 0");
  const double kS = kappa(S);
  if (!(kappa_value > 0.0) || !(kappa_value < kS)) throw DomainError("kappa outside (0, kappa(S))");
  if (!(s > 0.0)) throw DomainError("sigma needs s > 0");
  const double m = S.mass();
  const double c = std::cos(kappa_value);
  return 2.0 * std::sqrt(2.0) * std::exp(-m * s * c) * strip_norm / std::sqrt(0.5 * m * s * c * (kS - kappa_value));
}

double sigma(const ScatteringFunction& S, double s, double kappa_value) {
  return sigma(S, s, kappa_value, strip_sup_norm(S, kappa_value));
}

double default_kappa(const ScatteringFunction& S) { return 0.5 * kappa(S); }

double distal_series(double x) {
  if (!(x >= 0.0)) throw DomainError("series argument must be nonnegative");
  return x < 1.0 ? 1.0 / (1.0 - x) : kInf;
}

XiTerms minus_series(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("series argument must be finite and nonnegative");
  XiTerms r;
  r.x = x;
  if (x == 0.0) {
    r.value = 1.0;
    r.terms = 1;
    return r;
  }
  // log-sum-exp over t_n = n log x - lgamma(n+1)/2; terms peak near n = x^2.
  const double lx = std::log(x);
  double lmax = 0.0;  // log t_0
  double acc = 1.0;   // sum of exp(t_n - lmax)
  const double peak = x * x;
  int n = 1;
  for (;; ++n) {
    const double t = n * lx - 0.5 * std::lgamma(n + 1.0);
    if (t > lmax) {
      acc = acc * std::exp(lmax - t) + 1.0;
      lmax = t;
    } else {
      acc += std::exp(t - lmax);
    }
    // Past the peak the ratio x / sqrt(n+1) < 1 bounds the tail geometrically.
    if (n > peak) {
      const double ratio = x / std::sqrt(n + 2.0);
      const double tail = std::exp(t - lmax) * ratio / (1.0 - ratio);
      if (ratio < 1.0 && tail < 1e-13 * acc) break;
    }
    if (n > 100000000) throw ConvergenceError("minus series did not converge");
  }
  r.terms = n + 1;
  r.log_value = lmax + std::log(acc);
  r.value = std::exp(r.log_value);
  return r;
}

DistalBound xi_bound_distal(const ScatteringFunction& S, double s, double kappa_value, const TraceNormOptions& opts,
                            bool refine) {
  DistalBound d;
  d.sigma = sigma(S, s, kappa_value);
  d.trace = trace_norm_estimate(KernelOperator::modular(s, kappa_value, S.mass()), refine, opts);
  d.x = d.sigma * d.trace.value;
  d.value = distal_series(d.x);
  return d;
}

MinusBound xi_bound_minus(const ScatteringFunction& S, double s, double kappa_value, const TraceNormOptions& opts,
                          bool refine) {
  if (!S.minus_class()) throw DomainError("minus bound needs a = 0 and S(0) = -1");
  MinusBound b;
  b.strip_norm = strip_sup_norm(S, kappa_value);
  b.sigma = sigma(S, s, kappa_value, b.strip_norm);
  b.trace = trace_norm_estimate(KernelOperator::modular(s, kappa_value, S.mass()), refine, opts);
  b.series = minus_series(b.sigma * std::sqrt(b.strip_norm) * b.trace.value);
  return b;
}

SminResult find_s_min(const ScatteringFunction& S, double kappa_value, std::optional<std::pair<double, double>> bracket,
                      double tol, const TraceNormOptions& opts) {
  const double m = S.mass();
  const auto [lo0, hi0] = bracket.value_or(std::make_pair(1e-3 / m, 50.0 / m));
  if (!(lo0 > 0.0) || !(hi0 > lo0)) throw DomainError("invalid s_min bracket");
  const double norm = strip_sup_norm(S, kappa_value);
  auto h = [&](double s) {
    return sigma(S, s, kappa_value, norm) *
               trace_norm_estimate(KernelOperator::modular(s, kappa_value, m), false, opts).value -
           1.0;
  };
  SminResult r;
  r.lo = lo0;
  r.hi = hi0;
  double hlo = h(r.lo);
  const double hhi = h(r.hi);
  if (!(hlo > 0.0 && hhi < 0.0)) throw ConvergenceError("no sign change of the s_min objective in the bracket");
  while (r.hi - r.lo > tol) {
    const double mid = 0.5 * (r.lo + r.hi);
    const double hm = h(mid);
    if (hm > 0.0) {
      r.lo = mid;
      hlo = hm;
    } else {
      r.hi = mid;
    }
    if (++r.iterations > 200) throw ConvergenceError("s_min bisection did not terminate");
  }
  r.s_min = 0.5 * (r.lo + r.hi);
  return r;
}

double determinant_bound(const std::vector<double>& sv) {
  double logv = 0.0;
  for (double t : sv) {
    if (t >= 1.0) return kInf;
    logv -= 2.0 * std::log1p(-t);
  }
  return std::exp(logv);
}

BoseBound free_bose_bound(double s, double mass, const TraceNormOptions& opts) {
  BoseBound b;
  b.sv_phi = singular_values(KernelOperator::bose_phi(s, mass), opts.window, opts.nodes);
  b.sv_pi = singular_values(KernelOperator::bose_pi(s, mass), opts.window, opts.nodes);
  b.max_phi = b.sv_phi.front();
  b.max_pi = b.sv_pi.front();
  b.det_phi = determinant_bound(b.sv_phi);
  b.det_pi = determinant_bound(b.sv_pi);
  b.value = b.det_phi * b.det_pi;
  return b;
}

FermiBound ising_fermi_bound(double s, double mass, const TraceNormOptions& opts) {
  FermiBound f;
  const TraceNormResult a = trace_norm_estimate(KernelOperator::bose_phi(s, mass), false, opts);
  const TraceNormResult b = trace_norm_estimate(KernelOperator::bose_pi(s, mass), false, opts);
  f.trace_phi = a.value;
  f.trace_pi = b.value;
  f.value = std::exp(2.0 * a.value + 2.0 * b.value);
  f.det_compare = determinant_bound(a.singular_values) * determinant_bound(b.singular_values);
  return f;
}

PartitionBound partition_bound(const ScatteringFunction& S, double beta, double r, double kappa_value, bool improved,
                               const TraceNormOptions& opts) {
  if (!(beta > 0.0) || !(r > 0.0)) throw DomainError("partition bound needs beta > 0 and r > 0");
  PartitionBound p;
  p.mu = std::atan(beta / (2.0 * r)) / (2.0 * kPi);
  p.s_eff = r * std::sin(2.0 * kPi * p.mu);
  if (!(p.s_eff > 0.0)) throw DomainError("effective damping is not positive");
  p.prefactor = improved ? 1.0 : 2.0;
  p.xi = xi_bound_minus(S, p.s_eff, kappa_value, opts, false);
  p.log_value = std::log(p.prefactor) + p.xi.series.log_value;
  p.value = p.prefactor * p.xi.series.value;
  return p;
}

NuclearityReport nuclearity_curve(const ScatteringFunction& S, double kappa_value, const std::vector<double>& s_values,
                                  bool refine, const TraceNormOptions& opts) {
  NuclearityReport rep;
  rep.model = describe(S);
  rep.kappa = kappa_value;
  rep.strip_norm = strip_sup_norm(S, kappa_value);
  for (double s : s_values) {
    CurvePoint c;
    c.s = s;
    c.sigma = sigma(S, s, kappa_value, rep.strip_norm);
    c.trace = trace_norm_estimate(KernelOperator::modular(s, kappa_value, S.mass()), refine, opts);
    c.x_distal = c.sigma * c.trace.value;
    c.distal = distal_series(c.x_distal);
    if (S.minus_class()) c.minus = minus_series(c.sigma * std::sqrt(rep.strip_norm) * c.trace.value);
    rep.curve.push_back(std::move(c));
  }
  return rep;
}

}  // namespace fsm
