#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace kinhydro {

/**
 * @brief Periodic box [0, L)^d with n points per axis and its FFTW plans.
 *
 * Fourier coefficients are normalized so that f(x) = sum_k f_k exp(i k.x)
 * (forward transform divides by n^d). Modes are stored in FFTW row-major
 * order; integer wavenumber of index i along an axis is i for i <= n/2 and
 * i - n otherwise.
 *
 * Planning is serialized by an internal mutex; executing plans is thread-safe.
 */
class FourierGrid
{
 public:
  FourierGrid(int dim, int n, double box_length);
  ~FourierGrid();
  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;

  int dim() const { return dim_; }
  int n() const { return n_; }
  double box_length() const { return length_; }
  std::size_t size() const { return size_; }

  std::array<int, 3> integer_mode(std::size_t idx) const;
  /// Flat index of an integer wavenumber (components taken modulo n).
  std::size_t index_of(const std::array<int, 3>& k) const;
  /// Index of the mode -k.
  std::size_t partner(std::size_t idx) const { return partner_[idx]; }
  /// Physical wavevector (2 pi / L) k.
  Eigen::VectorXd wavevector(std::size_t idx) const;
  double wavevector_norm(std::size_t idx) const;
  /// 2/3 rule: all |k_i| <= n/3.
  bool dealiased(std::size_t idx) const { return dealiased_[idx] != 0; }
  const std::vector<std::size_t>& retained_modes() const { return retained_; }

  /// Physical coordinate of grid point idx.
  Eigen::VectorXd point(std::size_t idx) const;

  /// In-place transforms of `howmany` interleaved fields (element (x, f) at x*howmany + f).
  void forward(std::complex<double>* data, int howmany) const;
  void inverse(std::complex<double>* data, int howmany) const;

 private:
  struct Plans;
  const Plans& plans(int howmany) const;

  int dim_;
  int n_;
  double length_;
  std::size_t size_;
  std::vector<std::size_t> partner_;
  std::vector<char> dealiased_;
  std::vector<std::size_t> retained_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<Plans>> plans_;
};

}  // namespace kinhydro
