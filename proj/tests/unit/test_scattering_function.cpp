#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fsm/errors.hpp"
#include "fsm/scattering_function.hpp"

using namespace fsm;

namespace {

const cplx I(0.0, 1.0);

// Closed forms written independently of the product evaluator.
cplx resonance_closed(cplx z) { return (I - std::sqrt(2.0) * std::sinh(z)) / (I + std::sqrt(2.0) * std::sinh(z)); }
cplx shg_closed(double B, cplx z) {
  const double s = std::sin(kPi * B);
  return (std::sinh(z) - I * s) / (std::sinh(z) + I * s);
}

std::vector<ScatteringFunction> catalogue() {
  return {free_model(), ising_model(), sinh_gordon(0.5), single_zero(-1, kPi / 4), single_zero(1, kPi / 4),
          sinh_gordon(0.3), build_model(1, 0.0, {cplx(0.4, 1.0)}, 1.0), build_model(-1, 0.7, {cplx(0.0, 0.3)}, 1.0)};
}

}  // namespace

TEST(ScatteringFunction, ConstantModels) {
  for (cplx z : {cplx(0.3, 0.0), cplx(-2.0, 1.1), cplx(5.0, -0.4)}) {
    EXPECT_EQ(free_model()(z), cplx(1.0));
    EXPECT_EQ(ising_model()(z), cplx(-1.0));
  }
}

TEST(ScatteringFunction, MatchesClosedForms) {
  const ScatteringFunction res = single_zero(1, kPi / 4);
  const ScatteringFunction shg = sinh_gordon(0.5);
  const ScatteringFunction shg3 = sinh_gordon(0.3);
  for (double re : {-3.0, -0.7, 0.0, 0.4, 2.5})
    for (double im : {-0.3, 0.0, 0.5, 2.0}) {
      const cplx z(re, im);
      if (std::abs(I + std::sqrt(2.0) * std::sinh(z)) > 1e-3) EXPECT_LT(std::abs(res(z) - resonance_closed(z)), 1e-13);
      if (std::abs(std::sinh(z) + I) > 1e-3) EXPECT_LT(std::abs(shg(z) - shg_closed(0.5, z)), 1e-13);
      if (std::abs(std::sinh(z) + I * std::sin(0.3 * kPi)) > 1e-3) EXPECT_LT(std::abs(shg3(z) - shg_closed(0.3, z)), 1e-13);
    }
}

TEST(ScatteringFunction, SinhGordonLimits) {
  const ScatteringFunction S = sinh_gordon(0.5);
  EXPECT_NEAR(std::abs(S(0.0) + 1.0), 0.0, 1e-15);
  EXPECT_LT(std::abs(S(30.0) - 1.0), 1e-12);
  EXPECT_LT(std::abs(S(-30.0) - 1.0), 1e-12);
}

TEST(ScatteringFunction, TwoPiPeriodic) {
  for (const auto& S : catalogue())
    for (double t : {-1.3, 0.2, 0.9}) {
      const cplx z(t, 0.37);
      EXPECT_LT(std::abs(S(z) - S(z + cplx(0.0, 2.0 * kPi))), 1e-11);
    }
}

TEST(ScatteringFunction, RelationsOnCatalogue) {
  std::vector<double> th;
  for (int i = 0; i < 201; ++i) th.push_back(-8.0 + 16.0 * i / 200.0);
  for (const auto& S : catalogue()) {
    const RelationReport r = verify_relations(S, th, 1e-12);
    EXPECT_TRUE(r.pass) << describe(S) << " residual " << r.max_residual();
  }
}

TEST(ScatteringFunction, PropertyRelationsRandomSamples) {
  // Unitarity, crossing and hermitian analyticity as independent checks.
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (const auto& S : catalogue())
    for (int k = 0; k < 200; ++k) {
      const double t = u(eng);
      const cplx s = S(t);
      EXPECT_NEAR(std::abs(s), 1.0, 1e-12);
      EXPECT_LT(std::abs(S(cplx(t, kPi)) - S(-t)), 1e-11);
      EXPECT_LT(std::abs(std::conj(s) - S(-t)), 1e-12);
    }
}

TEST(ScatteringFunction, UnmatchedZeroBreaksUnitarity) {
  ModelOptions o;
  o.auto_mirror = false;
  o.enforce_mirror = false;
  const ScatteringFunction S = build_model(1, 0.0, {cplx(0.4, kPi / 3)}, 1.0, o);
  EXPECT_FALSE(S.mirror_consistent());
  std::vector<double> th;
  for (int i = 0; i < 101; ++i) th.push_back(-5.0 + 0.1 * i);
  const RelationReport r = verify_relations(S, th, 1e-12);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.conj_inverse, 1e-2);
  EXPECT_GT(r.modulus, 1e-2);
  // Each factor maps to its inverse under sinh(t + i pi) = -sinh t, so crossing survives.
  EXPECT_LT(r.crossing, 1e-12);
}

TEST(ScatteringFunction, EnforceMirrorRejects) {
  ModelOptions o;
  o.auto_mirror = false;
  EXPECT_THROW(build_model(1, 0.0, {cplx(0.4, 1.0)}, 1.0, o), DomainError);
}

TEST(ScatteringFunction, AutoMirrorAppendsPartner) {
  const ScatteringFunction S = build_model(1, 0.0, {cplx(0.4, 1.0)}, 1.0);
  ASSERT_EQ(S.zeros().size(), 2u);
  EXPECT_LT(std::abs(S.zeros()[1] - cplx(-0.4, 1.0)), 1e-15);
}

TEST(ScatteringFunction, PoleProximityThrows) {
  const ScatteringFunction S = sinh_gordon(0.5);
  // Pole where sinh zeta = -i.
  EXPECT_THROW(S(cplx(0.0, -kPi / 2)), PoleError);
}

TEST(ScatteringFunction, Kappa) {
  EXPECT_DOUBLE_EQ(kappa(free_model()), kPi / 2);
  EXPECT_DOUBLE_EQ(kappa(ising_model()), kPi / 2);
  EXPECT_NEAR(kappa(single_zero(1, kPi / 4)), kPi / 4, 1e-15);
  EXPECT_NEAR(kappa(sinh_gordon(0.5)), kPi / 2, 1e-15);
  EXPECT_NEAR(kappa(sinh_gordon(0.2)), std::asin(std::sin(0.2 * kPi)), 1e-14);
}

TEST(ScatteringFunction, StripNormAgainstDenseSampling) {
  const ScatteringFunction S = single_zero(1, kPi / 4);
  const double k = kPi / 8;
  const double v = strip_sup_norm(S, k);
  double oracle = 1.0;
  for (int i = 0; i <= 200000; ++i) {
    const double t = -30.0 + 60.0 * i / 200000.0;
    oracle = std::max(oracle, std::abs(resonance_closed(cplx(t, -k))));
  }
  EXPECT_GE(v, 1.0);
  EXPECT_NEAR(v, oracle, 1e-8 * oracle);
  EXPECT_NEAR(strip_sup_norm(ising_model(), 0.3), 1.0, 1e-14);
  EXPECT_NEAR(strip_sup_norm(free_model(), 0.3), 1.0, 1e-14);
}

TEST(ScatteringFunction, StripNormRejectsBadKappa) {
  EXPECT_THROW(strip_sup_norm(single_zero(1, kPi / 4), kPi / 3), DomainError);
  EXPECT_THROW(strip_sup_norm(single_zero(1, kPi / 4), -0.1), DomainError);
}

TEST(ScatteringFunction, PhaseShift) {
  const ScatteringFunction S = sinh_gordon(0.5);
  EXPECT_LT(std::abs(phase_shift(S, 0.0)), 1e-15);
  const cplx d1 = phase_shift(S, 1.0);
  EXPECT_LT(std::abs(d1.imag()), 1e-12);
  EXPECT_LT(std::abs(phase_shift(S, -1.0) + d1), 1e-12);
  EXPECT_LT(std::abs(std::exp(2.0 * I * d1) - S(1.0) / S(0.0)), 1e-12);
  EXPECT_LT(std::abs(phase_shift(ising_model(), cplx(0.7, 0.2))), 1e-15);
  // Branch tracking: continuity over a fine path.
  double prev = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double d = phase_shift(S, 8.0 * i / 400.0).real();
    EXPECT_LT(std::abs(d - prev), 0.1);
    prev = d;
  }
}

TEST(ScatteringFunction, YPhase) {
  const ScatteringFunction S = sinh_gordon(0.5);
  EXPECT_EQ(y_phase(S, -1, {}), cplx(1.0));
  EXPECT_EQ(y_phase(S, -1, {cplx(0.3)}), cplx(1.0));
  EXPECT_LT(std::abs(y_phase(ising_model(), -1, {cplx(0.2), cplx(-0.5)}) + 1.0), 1e-15);
  const cplx y = y_phase(S, -1, {cplx(1.0), cplx(0.0)});
  EXPECT_LT(std::abs(y + std::exp(I * phase_shift(S, 1.0))), 1e-14);
  EXPECT_NEAR(std::abs(y), 1.0, 1e-14);
}
