#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "kinhydro/collision_models.hpp"
#include "kinhydro/fourier_grid.hpp"
#include "kinhydro/kinetic_state.hpp"

namespace kinhydro {

/// Coefficient vectors of Phi_ij (index i*d + j) and Psi_i together with their right-hand sides.
struct PhiPsi
{
  std::vector<Eigen::VectorXd> phi;
  std::vector<Eigen::VectorXd> psi;
  std::vector<Eigen::VectorXd> phi_rhs;
  std::vector<Eigen::VectorXd> psi_rhs;
  double residual_phi = 0.0;
  double residual_psi = 0.0;
  /// max ||Pi_L x|| over all solutions.
  double kernel_component = 0.0;
};

/// Solves L Phi_ij = |v|^2/d delta_ij - v_i v_j and L Psi_i = v_i ((d+2)/2 - |v|^2/2) on (Ker L)^perp.
PhiPsi solve_phi_psi(const CollisionModel& model);

/// Moore-Penrose inverse of L from its eigendecomposition, eigenvalues |lambda| <= cutoff dropped.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& l, double cutoff = 1e-8);

struct HydroCoefficients
{
  double mu1 = 0.0;  // viscosity
  double mu2 = 0.0;  // thermal diffusivity
  double residual_phi = 0.0;
  double residual_psi = 0.0;
};

/// mu1 = -1/((d-1)(d+2)) sum_ij <Phi_ij, L Phi_ij>, mu2 = -2/(d(d+2)) sum_i <Psi_i, L Psi_i>.
HydroCoefficients viscosities(const CollisionModel& model);
HydroCoefficients viscosities(const CollisionModel& model, const PhiPsi& sol);

/// Fourier coefficients of (rho, u, theta) on a torus grid.
struct FluidTriple
{
  std::shared_ptr<const FourierGrid> grid;
  Eigen::VectorXcd rho;
  std::vector<Eigen::VectorXcd> u;
  Eigen::VectorXcd theta;

  static FluidTriple zeros(std::shared_ptr<const FourierGrid> grid);
};

/// Leray projector applied to a vector field in Fourier space (zero mode untouched).
void leray_project(const FourierGrid& grid, std::vector<Eigen::VectorXcd>& u);

/// (bar rho, P u, -bar rho) with bar rho = 2/(d+2) rho - d/(d+2) theta.
FluidTriple well_prepare(const FluidTriple& in);

/// g = M^{1/2}(rho + u.v + (|v|^2 - d) theta / 2) in basis coefficients, mode by mode.
KineticState lift(const FluidTriple& fluid, const VelocityBasis& basis);

/// (rho, u, theta) = (int g M^{1/2}, int v g M^{1/2}, (1/d) int (|v|^2 - d) g M^{1/2}).
FluidTriple moments(const KineticState& state, const VelocityBasis& basis);

/// Coefficient vector of a single fluid triple at one point of velocity space.
Eigen::VectorXd lift_coefficients(const VelocityBasis& basis, double rho, const Eigen::VectorXd& u, double theta);

}  // namespace kinhydro
