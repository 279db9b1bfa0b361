#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "kinhydro/fourier_grid.hpp"

namespace kinhydro {

/**
 * @brief Fourier (space) x Galerkin (velocity) coefficients of g(t, x, v).
 *
 * Entry (mode m, basis index a) is stored at m * nv + a, modes in the
 * FourierGrid order.
 */
struct KineticState
{
  std::shared_ptr<const FourierGrid> grid;
  int nv = 0;
  double t = 0.0;
  double eps = 1.0;
  std::vector<std::complex<double>> coeffs;

  KineticState() = default;
  KineticState(std::shared_ptr<const FourierGrid> g, int basis_size)
      : grid(std::move(g)), nv(basis_size), coeffs(grid->size() * static_cast<std::size_t>(basis_size))
  {
  }

  std::complex<double>* mode(std::size_t m) { return coeffs.data() + m * nv; }
  const std::complex<double>* mode(std::size_t m) const { return coeffs.data() + m * nv; }

  /// L^2_{x,v} norm per unit volume (Parseval with the grid normalization).
  double l2_norm() const
  {
    double s = 0.0;
    for (const auto& c : coeffs)
      s += std::norm(c);
    return std::sqrt(s);
  }
};

}  // namespace kinhydro
