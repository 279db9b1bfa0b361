#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <string>
#include <vector>

#include "kinhydro/collision_models.hpp"
#include "kinhydro/fluid_solver.hpp"
#include "kinhydro/hydro_limit.hpp"
#include "kinhydro/kinetic_solver.hpp"
#include "kinhydro/spectral_analyzer.hpp"

namespace kinhydro {

/// Parameters of the X^{l,k} proxy norm sup_v <v>^k ||f(., v)||_{H^l_x}.
struct NormSpec
{
  double ell = 2.0;
  double k = 3.0;
  std::vector<Eigen::VectorXd> nodes;
};

/// Validation nodes: tensor Gauss-Hermite nodes of the basis with |v| <= radius, plus the origin.
NormSpec make_norm_spec(const VelocityBasis& basis, double ell, double k, double radius = 6.0);

/// <xi> = 1 + |xi|, <v> = 1 + |v|; per-unit-volume Fourier normalization.
double xellk_norm(const KineticState& state, const VelocityBasis& basis, const NormSpec& spec);

/// Smooth mean-free test data: a Taylor-Green vortex plus a few temperature and density modes.
FluidTriple smooth_test_data(std::shared_ptr<const FourierGrid> grid, double amplitude);

struct ConvergenceRun
{
  double eps = 0.0;
  bool ok = false;
  std::string failure;
  std::vector<double> t;
  std::vector<double> error;
  std::vector<double> kinetic_norm;
  double sup_error = 0.0;
  double sup_norm = 0.0;
  double wall_seconds = 0.0;
};

struct SlopeFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  bool dropped_largest = false;
  int points = 0;
};

/// log y = intercept + slope log x; the largest x is dropped when its residual exceeds 3 sigma of the rest.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceReport
{
  std::vector<ConvergenceRun> runs;
  SlopeFit fit;
  bool strictly_decreasing = false;
  bool fit_valid = false;
};

struct ConvergenceOptions
{
  double T = 0.5;
  double dt = 1.0 / 256.0;
  int snapshots = 16;
};

/**
 * Runs the kinetic solver from lift(well_prepare(data)) and the NSF solver from
 * well_prepare(data) for each eps, comparing on shared snapshot times in the
 * X^{l,k} proxy norm.
 */
ConvergenceReport convergence_sweep(const CollisionModel& model, const HydroCoefficients& coeffs,
                                    const FluidTriple& data, const std::vector<double>& eps_list,
                                    const ConvergenceOptions& options, const NormSpec& spec);

struct IllPreparedRun
{
  double eps = 0.0;
  double frequency = 0.0;
  double expected = 0.0;
  double relative_error = 0.0;
  double sup_error = 0.0;  // distance to the NSF solution of the well-prepared part
  std::vector<double> t;
  std::vector<double> phase;
};

struct IllPreparedReport
{
  std::vector<IllPreparedRun> runs;
  double well_prepared_acoustic = 0.0;  // max_t ||U^eps_disp(t) g_in|| over eps and sampled t
  double ill_prepared_acoustic = 0.0;
  double max_frequency_error = 0.0;
};

struct IllPreparedOptions
{
  double T = 0.5;
  double dt = 1.0 / 256.0;
  double amplitude = 1e-3;
  std::array<int, 3> mode{1, 0, 0};
};

/// Ill-prepared single-mode data: the acoustic amplitude phase slope is compared with c |xi| / eps.
IllPreparedReport illprepared_experiment(const CollisionModel& model, const HydroCoefficients& coeffs,
                                         std::shared_ptr<const FourierGrid> grid,
                                         const std::vector<double>& eps_list, const IllPreparedOptions& options,
                                         const NormSpec& spec);

struct DecayReport
{
  BranchCoefficients branches;
  std::vector<RemainderDecay> remainder;
  std::vector<double> rate_ratios;  // rate(eps/2) / rate(eps) for consecutive halvings
  std::vector<WDecay> w;
  double envelope_spread = 0.0;  // max C / min C over eps
  double sigma_spread = 0.0;     // max |sigma_i - sigma_j| / mean sigma
  double kernel_data_output = 0.0;
  bool ratios_ok = false;
  bool w_ok = false;
};

/// W^eps test data: random coefficients orthogonal to Ker L on modes with 1 <= |k|_inf <= 2.
std::vector<ModeData> decay_test_modes(const CollisionModel& model, const FourierGrid& grid, unsigned seed);

DecayReport decay_suite(const CollisionModel& model, const FourierGrid& grid, const std::vector<double>& eps_list,
                        unsigned seed = 7, double w_horizon = 20.0);

}  // namespace kinhydro
