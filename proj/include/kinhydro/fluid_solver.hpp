#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "kinhydro/fourier_grid.hpp"
#include "kinhydro/hydro_limit.hpp"

namespace kinhydro {

/// Fourier fields of the Boussinesq NSF system; rho = -theta is implied.
struct FluidState
{
  std::shared_ptr<const FourierGrid> grid;
  std::vector<Eigen::VectorXcd> u;
  Eigen::VectorXcd theta;
  double t = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;

  static FluidState from_triple(const FluidTriple& f, double mu1, double mu2);
  FluidTriple to_triple() const;
  /// L^2 norm of u per unit volume.
  double velocity_norm() const;
  /// max_xi |xi . u(xi)|.
  double max_divergence() const;
  /// Homogeneous H^{1/2} norm of u per unit volume, sqrt(sum |xi| |u(xi)|^2).
  double velocity_half_norm() const;
};

/// Nonlinear terms (-P[(u.grad)u], -(u.grad)theta), dealiased by the 2/3 rule.
struct FluidNonlinear
{
  std::vector<Eigen::VectorXcd> u;
  Eigen::VectorXcd theta;
};

FluidNonlinear nsf_nonlinear(const FluidState& s);

/// Integrating-factor RK2 (Heun) step with exact diffusion factors.
void nsf_step(FluidState& s, double dt);

/// <u, P[(u.grad)u]> relative to ||u|| ||(u.grad)u||; zero in exact arithmetic.
double energy_orthogonality(const FluidState& s);

/// d/dt ||u||^2 from the discrete right-hand side and the dissipation -2 mu1 ||grad u||^2.
struct EnergyRates
{
  double rate = 0.0;
  double dissipation = 0.0;
};
EnergyRates energy_rates(const FluidState& s);

struct NsfResult
{
  FluidState state;
  bool blew_up = false;
  double t_star = 0.0;  // first time the blow-up detector fired
};

/**
 * Runs to T after enforcing well-preparation on the input. The observer sees the
 * initial state and every step. In d = 3 the run stops when ||u|| exceeds
 * blowup_factor times its initial value and reports that time.
 */
NsfResult nsf_simulate(const FluidTriple& fluid_in, double T, double dt, double mu1, double mu2,
                       const std::function<void(const FluidState&)>& observer = {}, double blowup_factor = 1e3);

}  // namespace kinhydro
