#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <unistd.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "kinhydro/errors.hpp"
#include "kinhydro/harness.hpp"
#include "kinhydro/kinetic_solver.hpp"
#include "support.hpp"

using namespace kinhydro;
using kinhydro::testing::bgk;
using kinhydro::testing::hard_sphere;
using cd = std::complex<double>;

namespace {

/// Real-valued random data (partner modes conjugate) on retained modes with |k|_inf <= kmax.
KineticState random_state(std::shared_ptr<const FourierGrid> grid, int nv, double amplitude, unsigned seed,
                          int kmax = 2)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  KineticState g(grid, nv);
  for (std::size_t m = 0; m < grid->size(); ++m) {
    const auto k = grid->integer_mode(m);
    if (std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])}) > kmax || !grid->dealiased(m))
      continue;
    const std::size_t p = grid->partner(m);
    if (p < m)
      continue;
    for (int a = 0; a < nv; ++a) {
      const cd c = p == m ? cd{normal(rng), 0.0} : cd{normal(rng), normal(rng)};
      g.mode(m)[a] = amplitude * c;
      g.mode(p)[a] = amplitude * std::conj(c);
    }
  }
  return g;
}

double distance(const KineticState& a, const KineticState& b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    s += std::norm(a.coeffs[i] - b.coeffs[i]);
  return std::sqrt(s);
}

std::shared_ptr<const FourierGrid> small_grid() { return std::make_shared<const FourierGrid>(2, 8, 2.0 * M_PI); }

}  // namespace

TEST(KineticSolver, LinearRunMatchesDirectMatrixExponentials)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const auto grid = small_grid();
  const double eps = 0.3, T = 0.25;
  KineticOptions opt;
  opt.eps = eps;
  opt.dt = 1.0 / 64.0;
  opt.nonlinear = false;
  KineticSolver solver(m, grid, opt);
  const KineticState g0 = random_state(grid, m.size(), 0.1, 1);
  KineticState g = g0;
  solver.simulate(g, T);

  const Eigen::MatrixXd v1 = m.basis->multiplication_matrix(0);
  const Eigen::MatrixXd v2 = m.basis->multiplication_matrix(1);
  double err = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const Eigen::VectorXd xi = grid->wavevector(k);
    const Eigen::MatrixXcd a =
        m.L.cast<cd>() - cd{0.0, eps} * (xi(0) * v1 + xi(1) * v2).cast<cd>();
    const Eigen::MatrixXcd e = (a * (T / (eps * eps))).exp();
    const Eigen::VectorXcd direct = e * Eigen::Map<const Eigen::VectorXcd>(g0.mode(k), m.size());
    err += (direct - Eigen::Map<const Eigen::VectorXcd>(g.mode(k), m.size())).squaredNorm();
    ref += direct.squaredNorm();
  }
  EXPECT_LE(std::sqrt(err / ref), 1e-10);
  EXPECT_LE(solver.diagnostics().max_norm_growth, 1e-12);
}

TEST(KineticSolver, ConservesMassMomentumAndEnergy)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const auto grid = small_grid();
  KineticOptions opt;
  opt.eps = 0.2;
  opt.dt = 1.0 / 64.0;
  KineticSolver solver(m, grid, opt);
  KineticState g = random_state(grid, m.size(), 0.05, 2);
  const auto before = zero_mode_moments(g, *m.basis);
  const double T = 0.5;
  solver.simulate(g, T);
  const auto after = zero_mode_moments(g, *m.basis);
  for (std::size_t i = 0; i < before.size(); ++i)
    EXPECT_LE(std::abs(after[i] - before[i]) / T, 1e-8) << "moment " << i;
  EXPECT_LT(solver.diagnostics().max_imag_physical, 1e-12);
}

TEST(KineticSolver, TimeStepSelfConvergenceIsSecondOrder)
{
  // Well-prepared data with eps = 0.5 so that dt resolves the acoustic time scale eps / c.
  const CollisionModel& m = hard_sphere(2, 6);
  const auto grid = std::make_shared<const FourierGrid>(2, 16, 2.0 * M_PI);
  const KineticState g0 = lift(well_prepare(smooth_test_data(grid, 0.2)), *m.basis);
  std::vector<KineticState> out;
  for (double dt : {1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0}) {
    KineticOptions opt;
    opt.eps = 0.5;
    opt.dt = dt;
    KineticSolver solver(m, grid, opt);
    KineticState g = g0;
    solver.simulate(g, 0.5);
    out.push_back(std::move(g));
  }
  const double order = std::log2(distance(out[0], out[1]) / distance(out[1], out[2]));
  EXPECT_GE(order, 1.8);
  EXPECT_LE(order, 2.2);
}

TEST(CollisionTerm, MatchesBilinearFormOnTrigonometricData)
{
  // g(x) = a + b cos(x_1): Gamma(g, g) = Gamma(a, a) + Gamma(b, b)/2 + 2 Gamma(a, b) cos x_1 + Gamma(b, b) cos(2 x_1)/2.
  const CollisionModel& m = hard_sphere(2, 6);
  const auto grid = small_grid();
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  Eigen::VectorXd a(m.size()), b(m.size());
  for (int i = 0; i < m.size(); ++i) {
    a(i) = normal(rng);
    b(i) = normal(rng);
  }
  KineticState g(grid, m.size());
  const std::size_t k1 = grid->index_of({1, 0, 0}), k2 = grid->index_of({2, 0, 0});
  for (int i = 0; i < m.size(); ++i) {
    g.mode(0)[i] = a(i);
    g.mode(k1)[i] = 0.5 * b(i);
    g.mode(grid->partner(k1))[i] = 0.5 * b(i);
  }
  const KineticState q = collision_term(m, g);
  const Eigen::VectorXd q0 = m.apply_gamma(a, a) + 0.5 * m.apply_gamma(b, b);
  const Eigen::VectorXd q1 = m.apply_gamma(a, b);
  const Eigen::VectorXd q2 = 0.25 * m.apply_gamma(b, b);
  const double scale = q0.norm();
  EXPECT_LT((Eigen::Map<const Eigen::VectorXcd>(q.mode(0), m.size()) - q0.cast<cd>()).norm(), 1e-12 * scale);
  EXPECT_LT((Eigen::Map<const Eigen::VectorXcd>(q.mode(k1), m.size()) - q1.cast<cd>()).norm(), 1e-12 * scale);
  EXPECT_LT((Eigen::Map<const Eigen::VectorXcd>(q.mode(k2), m.size()) - q2.cast<cd>()).norm(), 1e-12 * scale);
}

TEST(PropagatorCache, PartnerModesUseConjugates)
{
  const CollisionModel& m = bgk(2, 6);
  const auto grid = small_grid();
  const PropagatorCache cache(m, grid, 0.2, 1.0 / 128.0, true);
  const std::size_t k = grid->index_of({1, -2, 0});
  using K = PropagatorCache::Kind;
  for (K kind : {K::Exp, K::Phi1, K::Phi2})
    EXPECT_LT((cache.matrix(kind, grid->partner(k)) - cache.matrix(kind, k).conjugate()).cwiseAbs().maxCoeff(),
              1e-15);
  EXPECT_LE(cache.max_exp_norm(), 1.0 + 1e-12);
  EXPECT_THROW(cache.matrix(K::Exp, grid->index_of({3, 0, 0})), ValidationError);
}

TEST(KineticSolver, RejectsInvalidRequests)
{
  const auto grid = small_grid();
  KineticOptions opt;
  opt.nonlinear = true;
  EXPECT_THROW(KineticSolver(bgk(2, 6), grid, opt), ValidationError);
  opt.nonlinear = false;
  KineticSolver solver(bgk(2, 6), grid, opt);
  KineticState g(grid, bgk(2, 6).size());
  EXPECT_THROW(solver.simulate(g, 0.3), ValidationError);
}

TEST(KineticSolver, NonFiniteStateAborts)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const auto grid = small_grid();
  KineticOptions opt;
  opt.dt = 1.0 / 64.0;
  KineticSolver solver(m, grid, opt);
  KineticState g = random_state(grid, m.size(), 0.1, 5);
  g.mode(grid->index_of({1, 1, 0}))[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solver.simulate(g, 1.0 / 64.0), NumericalAbort);
}

TEST(KineticSolver, InstabilityDetectorFires)
{
  const CollisionModel& m = hard_sphere(2, 6);
  const auto grid = small_grid();
  KineticOptions opt;
  opt.dt = 1.0 / 64.0;
  opt.eps = 1.0;
  opt.instability_factor = 0.99;
  KineticSolver solver(m, grid, opt);
  // Density perturbations only: the norm barely moves in one step, so a factor below one must fire.
  KineticState g = random_state(grid, m.size(), 0.1, 6);
  for (std::size_t k = 0; k < grid->size(); ++k)
    for (int a = 1; a < m.size(); ++a)
      g.mode(k)[a] = 0.0;
  EXPECT_THROW(solver.simulate(g, 0.25), NumericalAbort);
}

TEST(KineticState, SnapshotRoundTripIsBitExact)
{
  const auto grid = small_grid();
  KineticState g = random_state(grid, 28, 0.3, 7);
  g.t = 0.125;
  g.eps = 0.1;
  const auto path = std::filesystem::temp_directory_path() / ("kinhydro_snap_" + std::to_string(::getpid()) + ".bin");
  write_snapshot(path, g, 6);
  const KineticState back = read_snapshot(path, grid, 28);
  EXPECT_EQ(std::memcmp(back.coeffs.data(), g.coeffs.data(), g.coeffs.size() * sizeof(cd)), 0);
  EXPECT_EQ(back.t, 0.125);
  EXPECT_EQ(back.eps, 0.1);
  std::filesystem::remove(path);
  EXPECT_THROW(read_snapshot(path, grid, 28), ValidationError);
}

TEST(KineticState, PositivityMarginOfEquilibriumIsOne)
{
  const auto grid = small_grid();
  KineticState g(grid, 28);
  g.eps = 0.1;
  const std::vector<Eigen::VectorXd> nodes{Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2)};
  EXPECT_EQ(positivity_margin(g, VelocityBasis(2, 6), nodes), 1.0);
}
