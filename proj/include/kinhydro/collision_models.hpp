#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kinhydro/velocity_basis.hpp"

namespace kinhydro {

enum class ModelKind
{
  HardSphere,
  Bgk
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/**
 * Quadrature orders for the collision integrals, written in center-of-mass
 * variables V = (v + v*)/2 and relative velocity w = v - v* = r omega:
 * Gauss-Hermite in V, a radial Gauss rule for r^d exp(-r^2/4), a sphere rule
 * for omega and one for the scattering direction sigma.
 */
struct CollisionQuadrature
{
  int center_nodes = 0;       // per axis
  int radial_nodes = 0;
  int relative_degree = 0;    // polynomial degree integrated exactly on S^{d-1} for omega
  int scattering_degree = 0;  // same for sigma

  /// Smallest orders that integrate every Galerkin entry exactly for degree K.
  static CollisionQuadrature exact_for(int max_degree);

  bool operator==(const CollisionQuadrature&) const = default;
};

/// Raw hard-sphere Galerkin tensors as produced by quadrature (the cached quantities).
struct RawCollisionTensors
{
  int dim = 0;
  int max_degree = 0;
  CollisionQuadrature quadrature;
  std::vector<double> gamma;  // N^3, entry (g, a, b) at (g*N + a)*N + b, symmetric in (a, b)
  std::vector<double> nu;     // N^2, row-major

  int size() const { return basis_size(dim, max_degree); }
};

/// Quadrature assembly of <phi_g, Gamma(phi_a, phi_b)> and <phi_g, nu phi_b> for hard spheres.
RawCollisionTensors assemble_hard_sphere_tensors(const VelocityBasis& basis, const CollisionQuadrature& quadrature);

/**
 * @brief Galerkin representation of the linearized and bilinear collision operators.
 *
 * L is symmetric negative semidefinite with an exact (d+2)-dimensional kernel
 * (enforced by projection after assembly); Gamma is symmetric in its two
 * arguments. Immutable once built.
 */
class CollisionModel
{
 public:
  ModelKind kind = ModelKind::HardSphere;
  std::shared_ptr<const VelocityBasis> basis;
  KernelProjector projector;

  Eigen::MatrixXd L;   // units 1/time
  Eigen::MatrixXd nu;  // multiplication by nu(v), projected
  Eigen::MatrixXd K;   // L + nu
  std::vector<double> gamma;
  bool has_gamma = false;
  std::string gamma_source;  // "hard-sphere", "none"
  double relaxation_rate = 0.0;

  /// Eigenvalues of L (ascending) and derived structure.
  Eigen::VectorXd spectrum;
  int kernel_dimension = 0;
  double spectral_gap = 0.0;
  /// Largest |lambda| among the near-zero eigenvalues before kernel enforcement.
  double raw_kernel_residual = 0.0;
  CollisionQuadrature quadrature;

  int size() const { return static_cast<int>(L.rows()); }
  int dim() const { return basis->dim(); }
  int max_degree() const { return basis->max_degree(); }

  /// Gamma(f, g) in coefficient space.
  Eigen::VectorXd apply_gamma(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;
};

/// Builds the hard-sphere model from raw tensors (symmetrize, kernel enforcement, Grad split).
CollisionModel hard_sphere_from_tensors(std::shared_ptr<const VelocityBasis> basis, const RawCollisionTensors& raw);

CollisionModel assemble_hard_sphere(std::shared_ptr<const VelocityBasis> basis);

/// L = rate (Pi_L - Id). Gamma is zero unless gamma_source is given, in which case its tensor is reused.
CollisionModel assemble_bgk(std::shared_ptr<const VelocityBasis> basis, double rate,
                            const CollisionModel* gamma_source = nullptr);

/// Hard-sphere collision frequency nu(v) = int |v - v*| M(v*) dsigma dv*, by high-order quadrature.
double collision_frequency(std::span<const double> v);

}  // namespace kinhydro
