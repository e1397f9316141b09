#include <gtest/gtest.h>

#include <cmath>

#include "fsm/errors.hpp"
#include "fsm/fock_space.hpp"

using namespace fsm;

namespace {

std::vector<ScatteringFunction> models() {
  return {free_model(), ising_model(), sinh_gordon(0.5), single_zero(-1, kPi / 4)};
}

double diff(const Tensor& a, const Tensor& b, const RapidityGrid& g) {
  Tensor d = a;
  for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] -= b.data[i];
  return norm(d, g);
}

}  // namespace

TEST(Grid, TrapezoidWeightsAndSymmetry) {
  const RapidityGrid g = RapidityGrid::make(6.0, 41);
  EXPECT_DOUBLE_EQ(g.spacing, 0.3);
  EXPECT_NEAR(g.nodes[20], 0.0, 1e-15);
  double sum = 0.0;
  for (double w : g.weights) sum += w;
  EXPECT_NEAR(sum, 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(g.weights.front(), 0.15);
  for (int i = 0; i < 41; ++i) EXPECT_NEAR(g.nodes[i], -g.nodes[g.mirror(i)], 1e-14);
  EXPECT_THROW(RapidityGrid::make(6.0, 40), DomainError);
}

TEST(Permutations, ComposeAndInverse) {
  for (const Perm& p : all_perms(4))
    for (const Perm& q : all_perms(4)) {
      const Perm pq = compose(p, q);
      for (int k = 0; k < 4; ++k) EXPECT_EQ(pq[k], p[q[k]]);
    }
  for (const Perm& p : all_perms(4)) EXPECT_EQ(compose(p, inverse(p)), identity_perm(4));
  EXPECT_EQ(all_perms(4).size(), 24u);
}

TEST(Representation, TwoParticleTranspositionClosedForm) {
  // (D(tau) f)(t1, t2) = S(t2 - t1) f(t2, t1)
  const ScatteringFunction S = sinh_gordon(0.5);
  const FockSpace fs(S, make_grid(3.0, 7), 3);
  Rng rng(3);
  const Tensor t = random_tensor(fs.grid(), 2, rng);
  const Tensor d = apply_dn(fs, transposition(2, 0), t);
  const auto& th = fs.grid().nodes;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      EXPECT_LT(std::abs(d.data[i * 7 + j] - S(th[j] - th[i]) * t.data[j * 7 + i]), 1e-14);
}

TEST(Representation, GroupLawsAllModels) {
  Rng rng(11);
  for (const auto& S : models()) {
    const FockSpace fs(S, make_grid(4.0, 9), 4);
    const auto& g = fs.grid();
    for (int n = 2; n <= 4; ++n) {
      const Tensor t = random_tensor(g, n, rng);
      const double scale = norm(t, g);
      for (int k = 0; k + 1 < n; ++k) {
        const Perm tk = transposition(n, k);
        EXPECT_LT(diff(apply_dn(fs, tk, apply_dn(fs, tk, t)), t, g), 1e-12 * scale);
      }
      for (int k = 0; k + 2 < n; ++k) {
        const Perm a = transposition(n, k), b = transposition(n, k + 1);
        EXPECT_LT(diff(apply_dn(fs, a, apply_dn(fs, b, apply_dn(fs, a, t))),
                       apply_dn(fs, b, apply_dn(fs, a, apply_dn(fs, b, t))), g),
                  1e-12 * scale);
      }
      for (const Perm& p : all_perms(n)) {
        EXPECT_NEAR(norm(apply_dn(fs, p, t), g), scale, 1e-12 * scale);
        const Perm q = all_perms(n)[(p[0] * 7 + 3) % all_perms(n).size()];
        EXPECT_LT(diff(apply_dn(fs, compose(p, q), t), apply_dn(fs, p, apply_dn(fs, q, t)), g), 1e-12 * scale);
      }
    }
  }
}

TEST(Representation, ProjectionProperties) {
  Rng rng(5);
  for (const auto& S : models()) {
    const FockSpace fs(S, make_grid(4.0, 9), 4);
    const auto& g = fs.grid();
    for (int n = 1; n <= 4; ++n) {
      const Tensor t = random_tensor(g, n, rng), u = random_tensor(g, n, rng);
      const Tensor Pt = symmetrize(fs, t);
      EXPECT_LT(diff(symmetrize(fs, Pt), Pt, g), 1e-12 * norm(t, g));
      EXPECT_LT(std::abs(inner(Pt, u, g) - inner(t, symmetrize(fs, u), g)), 1e-12 * norm(t, g) * norm(u, g));
      for (int k = 0; k + 1 < n; ++k) EXPECT_LT(diff(apply_dn(fs, transposition(n, k), Pt), Pt, g), 1e-12 * norm(t, g));
    }
  }
}

TEST(Representation, IsingSymmetrizerIsAntisymmetrizer) {
  const FockSpace fs(ising_model(), make_grid(3.0, 5), 3);
  Rng rng(2);
  const Tensor t = random_tensor(fs.grid(), 2, rng);
  const Tensor p = symmetrize(fs, t);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      EXPECT_LT(std::abs(p.data[i * 5 + j] - 0.5 * (t.data[i * 5 + j] - t.data[j * 5 + i])), 1e-15);
}

TEST(Representation, SerialAgreesWithParallel) {
  Rng rng(9);
  const FockSpace fs(single_zero(-1, kPi / 4), make_grid(4.0, 9), 5);
  for (int n = 1; n <= 4; ++n) {
    const Tensor t = random_tensor(fs.grid(), n, rng);
    for (const Perm& p : all_perms(n)) EXPECT_LT(diff(apply_dn(fs, p, t), serial::apply_dn(fs, p, t), fs.grid()), 1e-14);
    EXPECT_LT(diff(symmetrize(fs, t), serial::symmetrize(fs, t), fs.grid()), 1e-14);
  }
  const FockVector Phi = random_fock(fs, 3, rng);
  const WaveFunction1 psi = random_wave(fs.grid_ptr(), rng);
  EXPECT_LT(norm(create(fs, psi, Phi) - serial::create(fs, psi, Phi)), 1e-14);
  EXPECT_LT(norm(annihilate(fs, psi, Phi) - serial::annihilate(fs, psi, Phi)), 1e-14);
}

TEST(Operators, AnnihilationClosedForm) {
  // (z(psi) Phi)_n(t) = sqrt(n+1) sum_a w_a psi_a Phi_{n+1}(a, t)
  const FockSpace fs(sinh_gordon(0.5), make_grid(3.0, 5), 4);
  Rng rng(4);
  const FockVector Phi = random_fock(fs, 3, rng);
  const WaveFunction1 psi = random_wave(fs.grid_ptr(), rng);
  const FockVector z = annihilate(fs, psi, Phi);
  const auto& w = fs.grid().weights;
  for (int n = 0; n <= 2; ++n) {
    const std::size_t block = ipow(5, n);
    for (std::size_t r = 0; r < block; ++r) {
      cplx acc = 0.0;
      for (int a = 0; a < 5; ++a) acc += w[a] * psi.values[a] * Phi.component(n + 1).data[a * block + r];
      EXPECT_LT(std::abs(z.component(n).data[r] - std::sqrt(n + 1.0) * acc), 1e-14);
    }
  }
}

TEST(Operators, CreationMatchesBoseAndFermiClosedForms) {
  // Constant S: z+(psi) acts as (1/sqrt n) sum_k S(0)^k psi(t_k) Phi(t without t_k).
  for (const double s0 : {1.0, -1.0}) {
    const FockSpace fs(s0 > 0 ? free_model() : ising_model(), make_grid(3.0, 5), 4);
    Rng rng(8);
    const FockVector Phi = random_fock(fs, 2, rng);
    const WaveFunction1 psi = random_wave(fs.grid_ptr(), rng);
    const FockVector c = create(fs, psi, Phi);
    for (int n = 1; n <= 3; ++n) {
      const std::size_t total = ipow(5, n);
      for (std::size_t o = 0; o < total; ++o) {
        std::vector<int> d(n);
        std::size_t r = o;
        for (int k = n - 1; k >= 0; --k) {
          d[k] = static_cast<int>(r % 5);
          r /= 5;
        }
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) {
          std::size_t rest = 0;
          for (int m = 0; m < n; ++m)
            if (m != k) rest = rest * 5 + d[m];
          acc += std::pow(s0, k) * psi.values[d[k]] * Phi.component(n - 1).data[rest];
        }
        EXPECT_LT(std::abs(c.component(n).data[o] - acc / std::sqrt(double(n))), 1e-14);
      }
    }
  }
}

TEST(Operators, AdjointnessAndBounds) {
  Rng rng(21);
  for (const auto& S : models()) {
    const FockSpace fs(S, make_grid(3.0, 7), 5);
    for (int trial = 0; trial < 5; ++trial) {
      const FockVector Phi = random_fock(fs, 3, rng), Psi = random_fock(fs, 4, rng);
      const WaveFunction1 psi = random_wave(fs.grid_ptr(), rng);
      WaveFunction1 cpsi = psi;
      for (auto& x : cpsi.values) x = std::conj(x);
      EXPECT_LT(std::abs(inner(create(fs, psi, Phi), Psi) - inner(Phi, annihilate(fs, cpsi, Psi).resized(3))), 1e-13);
      EXPECT_LE(norm(annihilate(fs, psi, Phi)), psi.norm() * number_norm(Phi, 0) * (1 + 1e-13));
      EXPECT_LE(norm(create(fs, psi, Phi)), psi.norm() * number_norm(Phi, 1) * (1 + 1e-13));
      EXPECT_LT(norm(create(fs, psi, Phi) - create_projected(fs, psi, Phi)), 1e-13);
      EXPECT_LT(symmetry_residual(fs, create(fs, psi, Phi)), 1e-13);
    }
  }
}

TEST(Operators, ZamolodchikovRelations) {
  Rng rng(31);
  for (const auto& S : models()) {
    const FockSpace fs(S, make_grid(3.0, 7), 5);
    for (int trial = 0; trial < 5; ++trial) {
      const WaveFunction1 psi = random_wave(fs.grid_ptr(), rng), phi = random_wave(fs.grid_ptr(), rng);
      const ZfReport z = check_zf_relations(fs, psi, phi, random_fock(fs, 3, rng), 1e-12);
      EXPECT_TRUE(z.pass) << z.zz << " " << z.zzdag;
    }
  }
}

TEST(Operators, ZfRelationWithWrongKernelFails) {
  // Dropping the S factor from the kernel must break the relation for a nonconstant S.
  const FockSpace fs(sinh_gordon(0.5), make_grid(3.0, 7), 5);
  Rng rng(1);
  const WaveFunction1 psi = random_wave(fs.grid_ptr(), rng), phi = random_wave(fs.grid_ptr(), rng);
  const FockVector Phi = random_fock(fs, 3, rng);
  const int N = 7;
  std::vector<cplx> K(N * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) K[a * N + b] = phi.values[a] * psi.values[b];
  const FockVector lhs = annihilate(fs, psi, annihilate(fs, phi, Phi));
  EXPECT_GT(norm(lhs - annihilate_pair(fs, K, Phi)), 1e-3);
}

TEST(Symmetries, ReflectionsAndPoincare) {
  Rng rng(17);
  for (const auto& S : models()) {
    const FockSpace fs(S, make_grid(3.0, 9), 3);
    const double h = fs.grid().spacing;
    FockVector Phi = random_fock(fs, 3, rng);
    // Keep amplitude away from the edge so one-step boosts stay on the grid.
    for (int n = 1; n <= 3; ++n) {
      auto& d = Phi.component(n).data;
      for (std::size_t o = 0; o < d.size(); ++o) {
        std::size_t r = o;
        for (int k = 0; k < n; ++k, r /= 9)
          if (r % 9 == 0 || r % 9 == 8) d[o] = 0.0;
      }
    }
    const FockVector J = reflect_j(Phi), G = reflect_gamma(Phi);
    EXPECT_LT(norm(reflect_j(J) - Phi), 1e-14);
    EXPECT_LT(norm(reflect_gamma(G) - Phi), 1e-14);
    EXPECT_LT(norm(reflect_j(G) - reflect_gamma(J)), 1e-14);
    EXPECT_LT(symmetry_residual(fs, J), 1e-13);
    EXPECT_LT(symmetry_residual(fs, G), 1e-13);
    const PoincareElement a{0.3, -0.7, h}, b{-0.2, 0.5, -h};
    EXPECT_LT(norm(poincare_apply(fs, a, poincare_apply(fs, b, Phi)) - poincare_apply(fs, compose(a, b), Phi)), 1e-13);
    EXPECT_LT(norm(poincare_apply(fs, a, poincare_apply(fs, inverse(a), Phi)) - Phi), 1e-13);
    EXPECT_LT(norm(reflect_j(poincare_apply(fs, a, reflect_j(Phi))) - poincare_apply(fs, {-a.x0, -a.x1, a.lambda}, Phi)),
              1e-13);
    EXPECT_LT(norm(reflect_gamma(poincare_apply(fs, a, reflect_gamma(Phi))) -
                   poincare_apply(fs, {-a.x0, a.x1, -a.lambda}, Phi)),
              1e-13);
    EXPECT_LT(norm(modular_boost(fs, -h / (2 * kPi), Phi) - poincare_apply(fs, {0, 0, h}, Phi)), 1e-14);
  }
}

TEST(Symmetries, VacuumInvariantAndJAntiunitary) {
  const FockSpace fs(sinh_gordon(0.5), make_grid(3.0, 9), 3);
  const FockVector omega = FockVector::vacuum(fs.grid_ptr(), 2);
  EXPECT_LT(norm(reflect_j(omega) - omega), 1e-15);
  EXPECT_LT(norm(poincare_apply(fs, {1.0, 0.4, 0.0}, omega) - omega), 1e-15);
  Rng rng(4);
  const FockVector a = random_fock(fs, 2, rng), b = random_fock(fs, 2, rng);
  EXPECT_LT(std::abs(inner(reflect_j(a), reflect_j(b)) - std::conj(inner(a, b))), 1e-14);
}

TEST(Symmetries, BoostOffGridThrows) {
  const FockSpace fs(free_model(), make_grid(3.0, 9), 2);
  Rng rng(6);
  const FockVector Phi = random_fock(fs, 1, rng);
  EXPECT_THROW(poincare_apply(fs, {0, 0, fs.grid().spacing}, Phi), SupportError);
  EXPECT_THROW(poincare_apply(fs, {0, 0, 0.5 * fs.grid().spacing}, Phi), DomainError);
}

TEST(FockVector, Arithmetic) {
  const FockSpace fs(free_model(), make_grid(3.0, 5), 3);
  Rng rng(12);
  const FockVector a = random_fock(fs, 2, rng);
  EXPECT_NEAR(norm(a), 1.0, 1e-14);
  EXPECT_NEAR(norm(a + a), 2.0, 1e-14);
  EXPECT_NEAR(norm(a - a), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inner(a, cplx(0, 2) * a) - cplx(0, 2)), 0.0, 1e-14);
  EXPECT_EQ(a.resized(4).n_max(), 4);
  EXPECT_NEAR(norm(a.resized(4)), 1.0, 1e-14);
}
