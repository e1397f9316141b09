#include <gtest/gtest.h>

#include <cmath>

#include "fsm/errors.hpp"
#include "fsm/wedge_locality.hpp"

using namespace fsm;

namespace {

const TestFunction2D kF = TestFunction2D::bump({-0.1, 0.3, 0.4, 0.8});
const TestFunction2D kG = TestFunction2D::bump({-0.4, 0.1, -1.1, -0.5});

std::vector<ScatteringFunction> bounded_models() {
  return {free_model(), ising_model(), sinh_gordon(0.5), single_zero(-1, kPi / 4)};
}

}  // namespace

TEST(WedgeQuadrature, GaussianIntegral) {
  const Integrand a = [](cplx t) { return std::exp(-t * t); };
  const Integrand one = [](cplx) { return cplx(1.0); };
  const CommutatorIntegrand F(a, one, 0.0, {});
  EXPECT_NEAR(integrate_commutator(free_model(), F, CommutatorKind::B, {}).real(), std::sqrt(kPi), 1e-13);
  EXPECT_NEAR(integrate_commutator(free_model(), F, CommutatorKind::C, {}).real(), -std::sqrt(kPi), 1e-13);
  EXPECT_NEAR(integrate_commutator(ising_model(), F, CommutatorKind::B, {0.3}).real(), -std::sqrt(kPi), 1e-13);
  EXPECT_NEAR(F.abs_mass(), std::sqrt(kPi), 1e-13);
}

TEST(WedgeQuadrature, TailCheckThrows) {
  const Integrand slow = [](cplx t) { return 1.0 / (1.0 + t * t); };
  const Integrand one = [](cplx) { return cplx(1.0); };
  EXPECT_THROW(CommutatorIntegrand(slow, one, 0.0, {}), ConvergenceError);
}

TEST(WedgeQuadrature, BAgainstTrapezoidOracle) {
  // Independent uniform trapezoid of f-(t) g+(t) S(t - t1) on a wide window.
  const auto f = TestFunction2D::gaussian({0.0, 1.0}, 0.4);
  const auto g = TestFunction2D::gaussian({0.1, -1.0}, 0.5);
  const ScatteringFunction S = sinh_gordon(0.5);
  const Integrand fm = [&](cplx z) { return mass_shell(f, -1, z, 1.0); };
  const Integrand gp = [&](cplx z) { return mass_shell(g, 1, z, 1.0); };
  const double t1 = 0.35;
  const cplx b = eval_b(S, fm, gp, {t1});
  cplx o = 0.0;
  const int n = 8001;
  const double h = 16.0 / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double t = -8.0 + i * h;
    o += (i == 0 || i == n - 1 ? 0.5 : 1.0) * fm(t) * gp(t) * S(t - t1);
  }
  o *= h;
  EXPECT_LT(std::abs(b - o), 1e-12 * std::max(1.0, std::abs(o)));
}

TEST(ContourIdentity, HoldsForBoundedModels) {
  const ContourData data = prepare_contour(kF, kG, 1.0);
  Rng rng(1);
  for (const auto& S : bounded_models())
    for (int n = 0; n <= 3; ++n) {
      const ContourReport r = verify_contour_identity(S, data, spectator_samples(n, 3, rng), 1e-6);
      EXPECT_TRUE(r.pass) << describe(S) << " n=" << n << " residual " << r.max_residual;
      EXPECT_LT(r.max_shift_residual, 1e-6);
      for (const auto& s : r.samples) EXPECT_GT(std::max(std::abs(s.b), std::abs(s.c)), 1e-8);
    }
}

TEST(ContourIdentity, NegativeControlFails) {
  const auto f2 = TestFunction2D::bump({-0.3, 0.3, -0.2, 0.4});
  const auto g2 = TestFunction2D::bump({-0.2, 0.4, -0.3, 0.3});
  EXPECT_THROW(prepare_contour(f2, g2, 1.0), SupportError);
  const ContourData bad = prepare_contour(f2, g2, 1.0, {}, false);
  Rng rng(2);
  const ContourReport r = verify_contour_identity(sinh_gordon(0.5), bad, spectator_samples(1, 3, rng), 1e-6);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_residual, 1e-2);
  EXPECT_TRUE(std::isinf(r.max_shift_residual));
}

TEST(ContourIdentity, RequiresBoundedClass) {
  const ScatteringFunction S = build_model(1, 0.5, {}, 1.0);
  const ContourData data = prepare_contour(kF, kG, 1.0);
  EXPECT_THROW(verify_contour_identity(S, data, {{}}, 1e-6), DomainError);
}

TEST(ContourIdentity, RefinementConvergesGeometrically) {
  Rng rng(3);
  const auto steps = contour_refinement_study(single_zero(-1, kPi / 4), kF, kG, spectator_samples(2, 2, rng),
                                              {2, 4, 8, 16, 32});
  ASSERT_EQ(steps.size(), 5u);
  EXPECT_TRUE(refinement_converges(steps));
  EXPECT_GT(steps.front().residual, 1e-4);
  EXPECT_LT(steps.back().residual, 1e-12);
  // Stalling above the floor is not convergence.
  auto stalled = steps;
  stalled[2].residual = stalled[1].residual * 0.5;
  EXPECT_FALSE(refinement_converges(stalled));
}

TEST(OperatorLocality, MultiplierRouteMatchesOperatorRoute) {
  const FockSpace fs(sinh_gordon(0.5), make_grid(6.0, 41), 3);
  Rng rng(5);
  const FockVector Phi = random_fock(fs, 1, rng);
  const auto f = normalized_on_grid(kF, fs.grid_ptr(), 1.0), g = normalized_on_grid(kG, fs.grid_ptr(), 1.0);
  const CommutatorReport r = verify_operator_commutator(fs, f, g, Phi, 1e-1);
  EXPECT_LT(r.multiplier_gap, 1e-13);
  EXPECT_LT(r.residual, 5e-2);
}

TEST(OperatorLocality, ResidualShrinksUnderGridRefinement) {
  const ScatteringFunction S = single_zero(-1, kPi / 4);
  std::vector<double> res;
  for (int N : {41, 81}) {
    const FockSpace fs(S, make_grid(6.0, N), 3);
    Rng rng(5);
    const FockVector Phi = random_fock(fs, 1, rng);
    const auto f = normalized_on_grid(kF, fs.grid_ptr(), 1.0), g = normalized_on_grid(kG, fs.grid_ptr(), 1.0);
    res.push_back(verify_operator_commutator(fs, f, g, Phi, 1.0).residual);
  }
  EXPECT_LT(res[1], 0.5 * res[0]);
}

TEST(Spectators, SamplesInRange) {
  Rng rng(4);
  const auto s = spectator_samples(3, 10, rng, 1.5);
  ASSERT_EQ(s.size(), 10u);
  for (const auto& t : s) {
    ASSERT_EQ(t.size(), 3u);
    for (double x : t) EXPECT_LE(std::abs(x), 1.5);
  }
}
