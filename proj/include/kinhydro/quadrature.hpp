#pragma once

#include <vector>

namespace kinhydro::quad {

/// One-dimensional quadrature rule.
struct Rule1D
{
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/**
 * @brief Nodes and weights from a three-term recurrence (Golub-Welsch).
 *
 * @param diag   recurrence coefficients a_k, k = 0..n-1
 * @param offsq  recurrence coefficients b_k, k = 1..n-1 (squared off-diagonals)
 * @param mu0    total mass of the measure
 */
Rule1D golub_welsch(const std::vector<double>& diag, const std::vector<double>& offsq, double mu0);

/// Gauss-Hermite rule for the standard normal density exp(-x^2/2)/sqrt(2 pi); weights sum to 1.
Rule1D gauss_hermite(int n);

/// Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

/**
 * @brief Gauss rule on [0, inf) for the weight r^power * exp(-r^2 / (2 scale^2)).
 *
 * Recurrence coefficients are obtained with the discretized Stieltjes procedure
 * on a fine composite Gauss-Legendre discretization, which stays stable at the
 * orders used here (n <= 40).
 */
Rule1D gauss_radial(int n, int power, double scale = 1.0);

/// Quadrature on the unit sphere S^{dim-1}; weights sum to the surface area.
struct SphereRule
{
  int dim = 2;
  std::vector<double> directions;  // size() * dim, row-major
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
  const double* direction(int i) const { return directions.data() + static_cast<std::size_t>(i) * dim; }
};

/**
 * @brief Sphere rule exact for polynomials of total degree <= degree.
 *
 * d = 2: trapezoid with degree + 1 equispaced angles.
 * d = 3: Gauss-Legendre in cos(theta) times trapezoid in phi.
 */
SphereRule sphere_rule(int dim, int degree);

/// Surface area of S^{dim-1}.
double sphere_area(int dim);

}  // namespace kinhydro::quad
