#include <gtest/gtest.h>

#include <cmath>

#include "kinhydro/errors.hpp"
#include "kinhydro/harness.hpp"
#include "support.hpp"

using namespace kinhydro;
using kinhydro::testing::bgk;
using kinhydro::testing::hard_sphere;
using cd = std::complex<double>;

namespace {

std::shared_ptr<const FourierGrid> small_grid() { return std::make_shared<const FourierGrid>(2, 8, 2.0 * M_PI); }

}  // namespace

TEST(NormSpec, RejectsSmallExponents)
{
  const VelocityBasis b(2, 6);
  EXPECT_THROW(make_norm_spec(b, 1.0, 3.0), ValidationError);
  EXPECT_THROW(make_norm_spec(b, 2.0, 2.0), ValidationError);
  const NormSpec spec = make_norm_spec(b, 2.0, 3.0);
  EXPECT_TRUE(spec.nodes.front().isZero());
  for (const auto& v : spec.nodes)
    EXPECT_LE(v.norm(), 6.0);
}

TEST(XellkNorm, ZeroStateAndSingleModeOracle)
{
  const VelocityBasis b(2, 6);
  const NormSpec spec = make_norm_spec(b, 2.0, 3.0);
  const auto grid = small_grid();
  KineticState g(grid, b.size());
  EXPECT_EQ(xellk_norm(g, b, spec), 0.0);

  // Single mode, single kernel element phi_0 = M^{1/2}.
  const std::size_t k = grid->index_of({1, 2, 0});
  g.mode(k)[0] = cd{0.3, 0.4};
  double best = 0.0;
  for (const auto& v : spec.nodes) {
    const double phi = std::exp(-v.squaredNorm() / 4.0) / std::sqrt(2.0 * M_PI);
    best = std::max(best, std::pow(1.0 + v.norm(), 3.0) * phi);
  }
  const double expected = std::pow(1.0 + std::sqrt(5.0), 2.0) * 0.5 * best;
  EXPECT_NEAR(xellk_norm(g, b, spec), expected, 1e-13 * expected);
}

TEST(XellkNorm, MonotoneInSobolevOrder)
{
  const VelocityBasis b(2, 6);
  const auto grid = small_grid();
  const KineticState g = lift(well_prepare(smooth_test_data(grid, 0.1)), b);
  EXPECT_GE(xellk_norm(g, b, make_norm_spec(b, 2.0, 3.0)), xellk_norm(g, b, make_norm_spec(b, 1.5, 3.0)));
}

TEST(FitLogLog, RecoversExactPowerLaw)
{
  const std::vector<double> x{0.4, 0.2, 0.1, 0.05};
  std::vector<double> y;
  for (double e : x)
    y.push_back(3.0 * std::pow(e, 0.75));
  const SlopeFit f = fit_loglog(x, y);
  EXPECT_NEAR(f.slope, 0.75, 1e-13);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
  EXPECT_FALSE(f.dropped_largest);
  EXPECT_EQ(f.points, 4);
}

TEST(FitLogLog, DropsPreasymptoticLargestPoint)
{
  const std::vector<double> x{0.8, 0.4, 0.2, 0.1, 0.05};
  std::vector<double> y;
  for (double e : x)
    y.push_back(e * (1.0 + 0.001 * std::sin(40.0 * e)));
  y[0] = 5.0;
  const SlopeFit f = fit_loglog(x, y);
  EXPECT_TRUE(f.dropped_largest);
  EXPECT_EQ(f.points, 4);
  EXPECT_NEAR(f.slope, 1.0, 0.01);
}

TEST(ConvergenceSweep, ZeroDataGivesZeroError)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const HydroCoefficients hc = viscosities(m);
  const auto grid = small_grid();
  ConvergenceOptions opt;
  opt.T = 0.0625;
  opt.dt = 1.0 / 64.0;
  const ConvergenceReport rep =
      convergence_sweep(m, hc, FluidTriple::zeros(grid), {0.2}, opt, make_norm_spec(*m.basis, 2.0, 3.0));
  ASSERT_EQ(rep.runs.size(), 1u);
  EXPECT_TRUE(rep.runs[0].ok);
  EXPECT_EQ(rep.runs[0].sup_error, 0.0);
  EXPECT_FALSE(rep.fit_valid);
}

TEST(ConvergenceSweep, ErrorsDecreaseWithEps)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const HydroCoefficients hc = viscosities(m);
  const auto grid = small_grid();
  ConvergenceOptions opt;
  opt.T = 0.125;
  opt.dt = 1.0 / 128.0;
  opt.snapshots = 4;
  const ConvergenceReport rep = convergence_sweep(m, hc, smooth_test_data(grid, 0.05), {0.4, 0.2, 0.1, 0.05}, opt,
                                                  make_norm_spec(*m.basis, 2.0, 3.0));
  EXPECT_TRUE(rep.fit_valid);
  EXPECT_TRUE(rep.strictly_decreasing);
  EXPECT_GE(rep.fit.slope, 0.4);
  for (const auto& r : rep.runs) {
    EXPECT_EQ(r.t.size(), 5u);
    EXPECT_LE(r.error.front(), 1e-20);
  }
}

TEST(SemigroupOracle, LinearSolverAtUnitEpsMatchesSpectralSemigroup)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const auto grid = small_grid();
  const double kappa = branch_coefficients(m).kappa;
  KineticOptions opt;
  opt.eps = 1.0;
  opt.dt = 1.0 / 32.0;
  opt.nonlinear = false;
  KineticSolver solver(m, grid, opt);
  KineticState g = lift(smooth_test_data(grid, 0.2), *m.basis);
  const KineticState g0 = g;
  solver.simulate(g, 0.5);
  double worst = 0.0;
  for (std::size_t k : grid->retained_modes()) {
    const SemigroupSplit s = semigroup_split(m, 1.0, grid->wavevector(k), 0.5, kappa);
    const Eigen::VectorXcd expected = s.full * Eigen::Map<const Eigen::VectorXcd>(g0.mode(k), m.size());
    worst = std::max(worst, (expected - Eigen::Map<const Eigen::VectorXcd>(g.mode(k), m.size())).norm());
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(IllPrepared, FrequencyScalesAsSpeedOverEps)
{
  const CollisionModel& m = bgk(2, 6);
  const HydroCoefficients hc = viscosities(m);
  IllPreparedOptions opt;
  opt.T = 0.25;
  opt.dt = 1.0 / 256.0;
  const IllPreparedReport rep =
      illprepared_experiment(m, hc, small_grid(), {0.1, 0.05}, opt, make_norm_spec(*m.basis, 2.0, 3.0));
  EXPECT_LE(rep.max_frequency_error, 0.05);
  EXPECT_LE(rep.well_prepared_acoustic, 1e-6);
  EXPECT_GT(rep.ill_prepared_acoustic, 1e-5);
}

TEST(DecaySuite, RatiosEnvelopeAndKernelData)
{
  const CollisionModel& m = bgk(2, 6);
  const FourierGrid grid(2, 8, 2.0 * M_PI);
  const DecayReport rep = decay_suite(m, grid, {0.2, 0.1}, 7, 10.0);
  ASSERT_EQ(rep.rate_ratios.size(), 1u);
  EXPECT_GE(rep.rate_ratios[0], 3.6);
  EXPECT_LE(rep.rate_ratios[0], 4.4);
  EXPECT_TRUE(rep.ratios_ok);
  EXPECT_TRUE(rep.w_ok);
  EXPECT_LE(rep.kernel_data_output, 1e-12);
  for (const auto& w : rep.w) {
    EXPECT_GT(w.sigma, 0.0);
    for (std::size_t i = 1; i < w.t.size(); ++i)
      EXPECT_LE(w.norm[i], (1.0 + 1e-9) * w.envelope * std::exp(-w.sigma * w.t[i]) / std::sqrt(w.t[i]));
  }
}

TEST(DecayModes, AreOrthogonalToKernelAndConjugatePaired)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const FourierGrid grid(2, 8, 2.0 * M_PI);
  const auto modes = decay_test_modes(m, grid, 3);
  ASSERT_FALSE(modes.empty());
  ASSERT_EQ(modes.size() % 2, 0u);
  for (std::size_t i = 0; i < modes.size(); i += 2) {
    EXPECT_LT((m.projector.matrix.cast<cd>() * modes[i].coeffs).norm(), 1e-14);
    EXPECT_LT((modes[i].xi + modes[i + 1].xi).norm(), 1e-15);
    EXPECT_LT((modes[i].coeffs.conjugate() - modes[i + 1].coeffs).norm(), 1e-15);
  }
}
