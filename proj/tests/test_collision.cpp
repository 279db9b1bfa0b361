#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kinhydro/errors.hpp"
#include "support.hpp"

using namespace kinhydro;
using kinhydro::testing::bgk;
using kinhydro::testing::hard_sphere;

TEST(CollisionFrequency, MatchesClosedFormAtOrigin)
{
  // nu(0) = |S^{d-1}| E_M |v_*|
  const double v2[2] = {0.0, 0.0};
  const double v3[3] = {0.0, 0.0, 0.0};
  EXPECT_NEAR(collision_frequency(v2), 2.0 * std::numbers::pi * std::sqrt(std::numbers::pi / 2.0), 1e-10);
  EXPECT_NEAR(collision_frequency(v3), 8.0 * std::sqrt(2.0 * std::numbers::pi), 1e-10);
}

TEST(CollisionFrequency, GrowsLinearlyForLargeSpeed)
{
  const double v[2] = {30.0, 0.0};
  EXPECT_NEAR(collision_frequency(v) / (2.0 * std::numbers::pi * 30.0), 1.0, 1e-3);
}

TEST(HardSphere, KernelHasDimensionDPlusTwo)
{
  for (auto [d, k] : {std::pair{2, 6}, std::pair{3, 4}}) {
    const CollisionModel& m = hard_sphere(d, k);
    EXPECT_EQ(m.kernel_dimension, d + 2);
    EXPECT_LT(m.raw_kernel_residual, 1e-6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.L);
    const Eigen::VectorXd ev = es.eigenvalues();
    int zero = 0;
    for (int i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) <= 1e-6)
        ++zero;
      else
        EXPECT_LT(ev(i), 0.0);
    }
    EXPECT_EQ(zero, d + 2);
    EXPECT_GT(m.spectral_gap, 0.0);
  }
}

TEST(HardSphere, SpectralGapIsStableUnderRefinement)
{
  const double g6 = hard_sphere(2, 6).spectral_gap;
  const double g8 = hard_sphere(2, 8).spectral_gap;
  EXPECT_GT(g6, 0.0);
  EXPECT_LE(std::abs(g8 - g6) / g6, 0.1);
}

TEST(HardSphere, LinearOperatorIsSymmetricAndAnnihilatesInvariants)
{
  const CollisionModel& m = hard_sphere(2, 6);
  EXPECT_LT((m.L - m.L.transpose()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((m.L * m.basis->kernel_basis()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((m.K - m.L - m.nu).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(HardSphere, BilinearTermIsSymmetricAndOrthogonalToKernel)
{
  const CollisionModel& m = hard_sphere(2, 6);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  const int n = m.size();
  double worst_kernel = 0.0, worst_sym = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd f(n), g(n);
    for (int a = 0; a < n; ++a) {
      f(a) = normal(rng);
      g(a) = normal(rng);
    }
    const Eigen::VectorXd fg = m.apply_gamma(f, g);
    worst_kernel = std::max(worst_kernel, (m.projector.matrix * fg).norm());
    worst_sym = std::max(worst_sym, (fg - m.apply_gamma(g, f)).norm());
  }
  EXPECT_LE(worst_kernel, 1e-8);
  EXPECT_LE(worst_sym, 1e-12);
}

TEST(HardSphere, GammaOfMaxwellianPerturbationsMatchesLinearization)
{
  // Gamma(M^{1/2}, g) + Gamma(g, M^{1/2}) = L g for the quadratic collision operator.
  const CollisionModel& m = hard_sphere(2, 6);
  const int n = m.size();
  Eigen::VectorXd e0 = Eigen::VectorXd::Unit(n, 0);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  g(m.basis->flat_index({1, 1, 0})) = 1.0;
  g(m.basis->flat_index({3, 0, 0})) = -0.5;
  const Eigen::VectorXd lin = 2.0 * m.apply_gamma(e0, g);
  EXPECT_LT((lin - m.L * g).norm(), 1e-9 * g.norm() * m.L.norm());
}

TEST(Bgk, OperatorIsNegativeComplementOfProjector)
{
  const CollisionModel& m = bgk(2, 6);
  const int n = m.size();
  const Eigen::MatrixXd expected = -(Eigen::MatrixXd::Identity(n, n) - m.basis->kernel_basis() *
                                                                           m.basis->kernel_basis().transpose());
  EXPECT_LT((m.L - expected).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_FALSE(m.has_gamma);
  EXPECT_NEAR(m.spectral_gap, 1.0, 1e-12);
}

TEST(CollisionModelKinds, ParseAndPrint)
{
  EXPECT_EQ(parse_model_kind("bgk"), ModelKind::Bgk);
  EXPECT_EQ(parse_model_kind("hard-sphere"), ModelKind::HardSphere);
  EXPECT_EQ(to_string(ModelKind::Bgk), "bgk");
  EXPECT_THROW(parse_model_kind("maxwell"), ValidationError);
}
