#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "kinhydro/quadrature.hpp"

namespace kinhydro {

/// Multi-index of Hermite degrees; unused trailing entries are zero when dim < 3.
using MultiIndex = std::array<int, 3>;

/// Global Maxwellian (2 pi)^{-d/2} exp(-|v|^2/2); d = v.size().
double maxwellian(std::span<const double> v);

/**
 * @brief Orthonormal Hermite-function basis of L^2(dv).
 *
 * Basis functions are phi_a(v) = p_a(v) M^{1/2}(v) with
 * p_a(v) = prod_i He_{a_i}(v_i) / sqrt(a_i!) (probabilists' Hermite), for all
 * multi-indices with |a| <= K. Flat indices follow graded lexicographic order:
 * total degree ascending, then multi-indices in descending lexicographic order
 * within a degree, so that index 1 is v_1 and index d is v_d.
 *
 * With this normalization the L^2(dv) inner product of phi_a, phi_b equals the
 * Maxwellian expectation E_M[p_a p_b], which the tensor Gauss-Hermite rule
 * evaluates exactly for polynomial integrands of per-axis degree < 2 n.
 *
 * Immutable after construction.
 */
class VelocityBasis
{
 public:
  VelocityBasis(int dim, int max_degree, int nodes_per_axis = 0);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  int nodes_per_axis() const { return nodes_per_axis_; }

  const MultiIndex& multi_index(int flat) const { return indices_[flat]; }
  /// Flat index of a multi-index, or -1 when |a| > K.
  int flat_index(const MultiIndex& a) const;

  /// Polynomial parts p_a(v) for all basis elements.
  void eval_polynomials(std::span<const double> v, std::span<double> out) const;
  /// Full basis function phi_a(v) = p_a(v) M^{1/2}(v).
  double eval_basis(int flat, std::span<const double> v) const;

  /// Normalized Hermite values h_n(x) = He_n(x)/sqrt(n!) for n = 0..max_n.
  static void hermite_table(double x, int max_n, double* out);

  // Tensor Gauss-Hermite quadrature for the weight M(v) dv.
  int num_nodes() const { return static_cast<int>(node_weights_.size()); }
  const double* node(int i) const { return nodes_.data() + static_cast<std::size_t>(i) * dim_; }
  double node_weight(int i) const { return node_weights_[i]; }
  /// p_a at quadrature node i (row i, column a).
  const Eigen::MatrixXd& node_table() const { return node_table_; }

  /// Integral of q(v) M(v) dv by quadrature.
  double integrate_against_maxwellian(const std::function<double(std::span<const double>)>& q) const;

  /// Coefficients of h = q(v) M^{1/2}(v): c_a = int q p_a M dv.
  Eigen::VectorXd project(const std::function<double(std::span<const double>)>& q) const;

  /// Gram matrix int phi_a phi_b dv computed by quadrature.
  Eigen::MatrixXd gram() const;

  /// Galerkin matrix of multiplication by v_axis (symmetric, tridiagonal along the axis).
  Eigen::MatrixXd multiplication_matrix(int axis) const;

  /// Coefficient vectors of the collision invariants (orthonormal): M^{1/2}, v_i M^{1/2},
  /// (|v|^2 - d)/sqrt(2d) M^{1/2}. Columns in that order, N x (d+2).
  Eigen::MatrixXd kernel_basis() const;

 private:
  int dim_;
  int max_degree_;
  int nodes_per_axis_;
  std::vector<MultiIndex> indices_;
  std::vector<double> nodes_;
  std::vector<double> node_weights_;
  Eigen::MatrixXd node_table_;
};

/// Orthogonal projector onto Ker L in coefficient space.
struct KernelProjector
{
  Eigen::MatrixXd matrix;  // N x N, symmetric idempotent, rank d+2
  Eigen::MatrixXd basis;   // N x (d+2), orthonormal columns

  int rank() const { return static_cast<int>(basis.cols()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& c) const { return matrix * c; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& c) const { return matrix.cast<std::complex<double>>() * c; }
};

KernelProjector kernel_projector(const VelocityBasis& basis);

/// Validated factory; rejects K < 2 and node counts below K + 1.
std::shared_ptr<const VelocityBasis> build_basis(int dim, int max_degree, int nodes_per_axis = 0);

/// Number of multi-indices with |a| <= K in dim dimensions.
int basis_size(int dim, int max_degree);

}  // namespace kinhydro
