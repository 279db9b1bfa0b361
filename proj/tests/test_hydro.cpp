#include <gtest/gtest.h>

#include <cmath>

#include "kinhydro/errors.hpp"
#include "kinhydro/hydro_limit.hpp"
#include "kinhydro/quadrature.hpp"
#include "kinhydro/spectral_analyzer.hpp"
#include "support.hpp"

using namespace kinhydro;
using kinhydro::testing::bgk;
using kinhydro::testing::hard_sphere;

namespace {

using cd = std::complex<double>;

/// E_M[q(v)] in d = 2 by a tensor Gauss-Hermite rule, independent of the basis machinery.
double gaussian_mean_2d(const std::function<double(double, double)>& q)
{
  const auto r = quad::gauss_hermite(12);
  double s = 0.0;
  for (int i = 0; i < r.size(); ++i)
    for (int j = 0; j < r.size(); ++j)
      s += r.weights[i] * r.weights[j] * q(r.nodes[i], r.nodes[j]);
  return s;
}

}  // namespace

TEST(Viscosity, BgkMatchesGaussianMomentOracle)
{
  // For L = -(Id - Pi), Phi and Psi equal minus their right-hand sides, so
  // mu1 = sum_ij E[A_ij^2] / ((d-1)(d+2)) and mu2 = 2 sum_i E[B_i^2] / (d(d+2)).
  const double a = gaussian_mean_2d([](double x, double y) {
    const double r2 = x * x + y * y;
    const double a11 = r2 / 2 - x * x, a22 = r2 / 2 - y * y, a12 = x * y;
    return a11 * a11 + a22 * a22 + 2.0 * a12 * a12;
  });
  const double b = gaussian_mean_2d([](double x, double y) {
    const double r2 = x * x + y * y;
    const double w = 2.0 - 0.5 * r2;
    return (x * x + y * y) * w * w;
  });
  const double mu1_oracle = a / 4.0;
  const double mu2_oracle = 2.0 * b / 8.0;
  EXPECT_NEAR(mu1_oracle, 1.0, 1e-12);
  EXPECT_NEAR(mu2_oracle, 1.0, 1e-12);
  const HydroCoefficients hc = viscosities(bgk(2, 6));
  EXPECT_NEAR(hc.mu1, mu1_oracle, 1e-10);
  EXPECT_NEAR(hc.mu2, mu2_oracle, 1e-10);
  EXPECT_LT(hc.residual_phi, 1e-12);
}

TEST(Viscosity, HardSphereMatchesDiffusiveBranches)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const HydroCoefficients hc = viscosities(m);
  EXPECT_GT(hc.mu1, 0.0);
  EXPECT_GT(hc.mu2, 0.0);
  EXPECT_LT(hc.residual_phi, 1e-10);
  EXPECT_LT(hc.residual_psi, 1e-10);
  const BranchCoefficients br = branch_coefficients(m);
  EXPECT_LE(std::abs(hc.mu1 - br.beta[3]) / hc.mu1, 0.05);
  EXPECT_LE(std::abs(hc.mu2 - br.beta[2]) / hc.mu2, 0.05);
}

TEST(Viscosity, SolutionsLieInKernelComplement)
{
  const PhiPsi sol = solve_phi_psi(hard_sphere(2, 6));
  EXPECT_EQ(sol.phi.size(), 4u);
  EXPECT_EQ(sol.psi.size(), 2u);
  EXPECT_LT(sol.kernel_component, 1e-10);
}

TEST(Viscosity, RightHandSideInKernelIsRejected)
{
  CollisionModel broken = bgk(2, 6);
  broken.projector.matrix = Eigen::MatrixXd::Identity(broken.size(), broken.size());
  EXPECT_THROW(solve_phi_psi(broken), ValidationError);
}

TEST(PseudoInverse, DropsNullDirections)
{
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(3, 3);
  l(0, 0) = -2.0;
  l(1, 1) = -4.0;
  const Eigen::MatrixXd p = pseudo_inverse(l);
  EXPECT_NEAR(p(0, 0), -0.5, 1e-15);
  EXPECT_NEAR(p(1, 1), -0.25, 1e-15);
  EXPECT_NEAR(p(2, 2), 0.0, 1e-15);
}

class FluidMaps : public ::testing::Test
{
 protected:
  std::shared_ptr<const FourierGrid> grid = std::make_shared<const FourierGrid>(2, 8, 2.0 * M_PI);

  FluidTriple random_triple(unsigned seed) const
  {
    std::srand(seed);
    FluidTriple f = FluidTriple::zeros(grid);
    auto fill = [&](Eigen::VectorXcd& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = cd{std::rand() / double(RAND_MAX) - 0.5, std::rand() / double(RAND_MAX) - 0.5};
      v(0) = 0.0;
    };
    fill(f.rho);
    fill(f.theta);
    for (auto& c : f.u)
      fill(c);
    return f;
  }
};

TEST_F(FluidMaps, LerayProjectionIsDivergenceFreeAndIdempotent)
{
  FluidTriple f = random_triple(3);
  leray_project(*grid, f.u);
  auto once = f.u;
  leray_project(*grid, f.u);
  for (std::size_t m = 0; m < grid->size(); ++m) {
    const Eigen::VectorXd xi = grid->wavevector(m);
    const auto mi = static_cast<Eigen::Index>(m);
    EXPECT_LT(std::abs(xi(0) * f.u[0](mi) + xi(1) * f.u[1](mi)), 1e-14);
    EXPECT_LT(std::abs(f.u[0](mi) - once[0](mi)), 1e-15);
  }
}

TEST_F(FluidMaps, WellPreparedDataSatisfiesBoussinesqRelation)
{
  const FluidTriple w = well_prepare(random_triple(4));
  EXPECT_LT((w.rho + w.theta).cwiseAbs().maxCoeff(), 1e-15);
  const FluidTriple again = well_prepare(w);
  EXPECT_LT((again.rho - w.rho).cwiseAbs().maxCoeff(), 1e-15);
}

TEST_F(FluidMaps, LiftAndMomentsRoundTrip)
{
  const VelocityBasis basis(2, 6);
  const FluidTriple f = random_triple(5);
  const FluidTriple back = moments(lift(f, basis), basis);
  EXPECT_LT((back.rho - f.rho).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((back.theta - f.theta).cwiseAbs().maxCoeff(), 1e-14);
  for (int a = 0; a < 2; ++a)
    EXPECT_LT((back.u[a] - f.u[a]).cwiseAbs().maxCoeff(), 1e-14);
}

TEST_F(FluidMaps, LiftedCoefficientsMatchPointwiseFormula)
{
  const VelocityBasis basis(2, 6);
  Eigen::VectorXd u(2);
  u << 0.3, -0.2;
  const Eigen::VectorXd c = lift_coefficients(basis, 0.5, u, 0.7);
  const double v[2] = {0.4, 1.1};
  double val = 0.0;
  for (int a = 0; a < basis.size(); ++a)
    val += c(a) * basis.eval_basis(a, v);
  const double expected = (0.5 + 0.3 * 0.4 - 0.2 * 1.1 + 0.7 * 0.5 * (0.16 + 1.21 - 2.0)) * std::sqrt(maxwellian(v));
  EXPECT_NEAR(val, expected, 1e-14);
}

TEST_F(FluidMaps, WellPreparationIsTheThermalPlusShearProjection)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const FluidTriple raw = random_triple(6);
  const KineticState projected = lift(well_prepare(raw), *m.basis);
  const KineticState lifted = lift(raw, *m.basis);
  double worst = 0.0;
  for (std::size_t k = 1; k < grid->size(); ++k) {
    const auto p0 = leading_projectors(m, grid->wavevector(k).normalized());
    const Eigen::Map<const Eigen::VectorXcd> g(lifted.mode(k), m.size());
    const Eigen::Map<const Eigen::VectorXcd> w(projected.mode(k), m.size());
    worst = std::max(worst, ((p0[2] + p0[3]) * g - w).cwiseAbs().maxCoeff());
    worst = std::max(worst, (p0[0] * w).cwiseAbs().maxCoeff());
    worst = std::max(worst, (p0[1] * w).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-6);
}
