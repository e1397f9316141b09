#include <gtest/gtest.h>

#include <cmath>

#include "fsm/errors.hpp"
#include "fsm/nuclearity.hpp"

using namespace fsm;

TEST(Kernels, GramMatchesResidueClosedForm) {
  // int dy 1/((x - y + ib)(x' - y - ib)) = 2 pi i / (x - x' + 2ib)
  const double a = 1.0, b = 0.4, L = 4.0;
  const int M = 21;
  const auto K = KernelOperator::general(a, b);
  const auto G = gram_matrix(K, L, M);
  const double h = 2 * L / (M - 1);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const double xi = -L + i * h, xj = -L + j * h;
      const double wi = (i == 0 || i == M - 1) ? h / 2 : h, wj = (j == 0 || j == M - 1) ? h / 2 : h;
      const cplx o = std::sqrt(wi * wj) * std::exp(-a * std::cosh(xi) - a * std::cosh(xj)) * 2.0 * kPi * cplx(0, 1) /
                     cplx(xi - xj, 2 * b);
      EXPECT_LT(std::abs(G[i * M + j] - o), 1e-12 * std::max(1.0, std::abs(o)));
    }
}

TEST(Kernels, SerialGramAgrees) {
  for (const auto& K : {KernelOperator::general(0.5, 0.3), KernelOperator::modular(1.0, kPi / 8, 1.0),
                        KernelOperator::bose_phi(1.0, 1.0), KernelOperator::bose_pi(1.0, 1.0)}) {
    const auto a = gram_matrix(K, 6.0, 60), b = serial::gram_matrix(K, 6.0, 60);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-14) << K.name();
  }
}

TEST(Kernels, PointwiseForms) {
  const auto K = KernelOperator::modular(2.0, 0.3, 1.5);
  const double t = 0.4, u = -0.2;
  const cplx o = std::exp(-(1.5 * 2.0 / 2) * std::cosh(t)) / (cplx(0, kPi) * cplx(u - t, -0.15));
  EXPECT_LT(std::abs(K(t, u) - o), 1e-15);
  EXPECT_THROW(KernelOperator::bose_phi(-1.0, 1.0), DomainError);
}

TEST(TraceNorm, BelowAnalyticBound) {
  for (double a : {0.5, 2.0})
    for (double b : {kPi / 8, kPi / 2}) {
      const TraceNormResult r = trace_norm_estimate(KernelOperator::general(a, b));
      EXPECT_TRUE(r.converged);
      EXPECT_LT(r.rel_change, 1e-3);
      EXPECT_LE(r.value, analytic_trace_bound(a, b)) << a << " " << b;
      const TraceNormResult m = trace_norm_estimate(KernelOperator::general(a, -b));
      EXPECT_NEAR(m.value, r.value, 1e-9 * r.value);
    }
}

TEST(TraceNorm, DecreasesWithDamping) {
  double prev = INFINITY;
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    const double v = trace_norm_estimate(KernelOperator::general(a, 0.5), false).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(TraceNorm, RequiresDamping) {
  EXPECT_THROW(trace_norm_estimate(KernelOperator{KernelKind::general, 0.0, {{-1.0, 1.0, 0.5}}}), DomainError);
}

TEST(TraceNorm, GramAndDirectRoutesSameOrder) {
  const auto K = KernelOperator::general(1.0, kPi / 2);
  const auto g = singular_values(K, 12.0, 400);
  const auto d = singular_values_direct(K, 12.0, 400);
  EXPECT_NEAR(d.front(), g.front(), 0.1 * g.front());
}

TEST(Series, MinusSeriesOracle) {
  double s = 0.0, lf = 0.0;
  for (int n = 0; n < 200; ++n) {
    if (n > 0) lf += std::log(double(n));
    s += std::exp(-0.5 * lf);
  }
  const XiTerms t = minus_series(1.0);
  EXPECT_NEAR(t.value, s, 1e-12);
  EXPECT_NEAR(t.value, 3.4695, 1e-3);
  EXPECT_NEAR(minus_series(0.0).value, 1.0, 1e-15);
  // Large x stays finite in log space.
  const XiTerms big = minus_series(200.0);
  EXPECT_TRUE(std::isfinite(big.log_value));
  EXPECT_GT(big.log_value, minus_series(100.0).log_value);
}

TEST(Series, Distal) {
  EXPECT_DOUBLE_EQ(distal_series(0.5), 2.0);
  EXPECT_TRUE(std::isinf(distal_series(1.0)));
  EXPECT_TRUE(std::isinf(distal_series(3.0)));
}

TEST(Sigma, ScalingAndMonotone) {
  const ScatteringFunction S = single_zero(-1, kPi / 4);
  const double k = default_kappa(S);
  EXPECT_NEAR(k, kPi / 8, 1e-15);
  EXPECT_GT(sigma(S, 0.5, k), sigma(S, 1.0, k));
  EXPECT_NEAR(sigma(S.with_mass(2.0), 0.5, k), sigma(S, 1.0, k), 1e-12 * sigma(S, 1.0, k));
  EXPECT_THROW(sigma(build_model(1, 0.3, {}, 1.0), 1.0, 0.1), DomainError);
}

TEST(Smin, DimensionalScaling) {
  const ScatteringFunction S = single_zero(-1, kPi / 4);
  const double k = default_kappa(S);
  const SminResult a = find_s_min(S, k), b = find_s_min(S.with_mass(2.0), k);
  EXPECT_GT(a.s_min, 0.0);
  EXPECT_LT(a.s_min, 10.0);
  EXPECT_NEAR(b.s_min / a.s_min, 0.5, 0.025);
  EXPECT_TRUE(std::isfinite(xi_bound_distal(S, 1.1 * a.s_min, k).value));
  EXPECT_TRUE(std::isinf(xi_bound_distal(S, 0.9 * a.s_min, k).value));
}

TEST(MinusBound, FiniteAndDecreasing) {
  for (const auto& S : {ising_model(), single_zero(-1, kPi / 4)}) {
    const double k = default_kappa(S);
    double prev = INFINITY;
    for (double s : {0.2, 0.5, 1.0, 2.0, 5.0}) {
      const MinusBound b = xi_bound_minus(S, s, k);
      EXPECT_TRUE(std::isfinite(b.series.log_value));
      EXPECT_LT(b.series.log_value, prev);
      prev = b.series.log_value;
    }
  }
  EXPECT_THROW(xi_bound_minus(free_model(), 1.0, 0.5), DomainError);
}

TEST(Bose, SingularValuesAndLimit) {
  const BoseBound b = free_bose_bound(1.0, 1.0);
  EXPECT_LT(b.max_phi, 1.0);
  EXPECT_LT(b.max_pi, 1.0);
  EXPECT_TRUE(std::isfinite(b.value));
  EXPECT_GT(b.value, 1.0);
  EXPECT_NEAR(free_bose_bound(10.0, 1.0).value, 1.0, 1e-3);
  EXPECT_DOUBLE_EQ(determinant_bound({0.5}), 4.0);
  EXPECT_TRUE(std::isinf(determinant_bound({1.0, 0.2})));
}

TEST(Fermi, ExponentialBelowDeterminant) {
  for (double s : {0.5, 1.0}) {
    const FermiBound f = ising_fermi_bound(s, 1.0);
    EXPECT_TRUE(std::isfinite(f.value));
    EXPECT_TRUE(std::isfinite(f.det_compare));
    EXPECT_LT(f.value, f.det_compare);
    EXPECT_NEAR(f.value, std::exp(2 * f.trace_phi + 2 * f.trace_pi), 1e-12 * f.value);
  }
}

TEST(Partition, IncreasesWithInverseTemperature) {
  const ScatteringFunction S = ising_model();
  double prev = -INFINITY;
  for (double beta : {1.0, 0.5, 0.2, 0.1}) {
    const PartitionBound p = partition_bound(S, beta, 1.0, default_kappa(S), false);
    EXPECT_TRUE(p.heuristic);
    EXPECT_NEAR(p.mu, std::atan(beta / 2.0) / (2 * kPi), 1e-15);
    EXPECT_GT(p.log_value, prev);
    prev = p.log_value;
  }
}

TEST(Curve, ReportShape) {
  const ScatteringFunction S = single_zero(-1, kPi / 4);
  const NuclearityReport r = nuclearity_curve(S, default_kappa(S), {0.5, 1.0, 2.0}, false);
  ASSERT_EQ(r.curve.size(), 3u);
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_LT(r.curve[i].sigma, r.curve[i - 1].sigma);
    EXPECT_LT(r.curve[i].trace.value, r.curve[i - 1].trace.value);
    ASSERT_TRUE(r.curve[i].minus.has_value());
  }
  EXPECT_GE(r.strip_norm, 1.0);
}
