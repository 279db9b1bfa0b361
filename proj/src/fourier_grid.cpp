#include "kinhydro/fourier_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "kinhydro/errors.hpp"

namespace kinhydro {

struct FourierGrid::Plans
{
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~Plans()
  {
    if (forward)
      fftw_destroy_plan(forward);
    if (inverse)
      fftw_destroy_plan(inverse);
  }
};

namespace {
std::mutex& planner_mutex()
{
  static std::mutex m;
  return m;
}
}  // namespace

FourierGrid::FourierGrid(int dim, int n, double box_length) : dim_(dim), n_(n), length_(box_length)
{
  if (dim != 2 && dim != 3)
    throw ValidationError("grid dimension must be 2 or 3");
  if (n < 4 || (n & (n - 1)) != 0)
    throw ValidationError("grid size must be a power of two >= 4");
  if (!(box_length > 0.0))
    throw ValidationError("box length must be positive");
  size_ = 1;
  for (int k = 0; k < dim; ++k)
    size_ *= static_cast<std::size_t>(n);
  partner_.resize(size_);
  dealiased_.resize(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    auto k = integer_mode(i);
    bool keep = true;
    for (int a = 0; a < dim; ++a)
      keep = keep && 3 * std::abs(k[a]) <= n;
    dealiased_[i] = keep ? 1 : 0;
    if (keep)
      retained_.push_back(i);
    for (int a = 0; a < dim; ++a)
      k[a] = -k[a];
    partner_[i] = index_of(k);
  }
}

FourierGrid::~FourierGrid()
{
  std::lock_guard lock(planner_mutex());
  plans_.clear();
}

std::array<int, 3> FourierGrid::integer_mode(std::size_t idx) const
{
  std::array<int, 3> k{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    const int i = static_cast<int>(idx % n_);
    idx /= n_;
    k[a] = i <= n_ / 2 ? i : i - n_;
  }
  return k;
}

std::size_t FourierGrid::index_of(const std::array<int, 3>& k) const
{
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a)
    idx = idx * n_ + static_cast<std::size_t>(((k[a] % n_) + n_) % n_);
  return idx;
}

Eigen::VectorXd FourierGrid::wavevector(std::size_t idx) const
{
  const auto k = integer_mode(idx);
  Eigen::VectorXd xi(dim_);
  for (int a = 0; a < dim_; ++a)
    xi(a) = 2.0 * std::numbers::pi / length_ * k[a];
  return xi;
}

double FourierGrid::wavevector_norm(std::size_t idx) const
{
  return wavevector(idx).norm();
}

Eigen::VectorXd FourierGrid::point(std::size_t idx) const
{
  Eigen::VectorXd x(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    x(a) = length_ * static_cast<double>(idx % n_) / n_;
    idx /= n_;
  }
  return x;
}

const FourierGrid::Plans& FourierGrid::plans(int howmany) const
{
  std::lock_guard lock(mutex_);
  auto it = plans_.find(howmany);
  if (it != plans_.end())
    return *it->second;
  std::lock_guard planner(planner_mutex());
  auto p = std::make_unique<Plans>();
  std::vector<int> dims(dim_, n_);
  auto* buf = fftw_alloc_complex(size_ * howmany);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p->forward = fftw_plan_many_dft(dim_, dims.data(), howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1,
                                  FFTW_FORWARD, flags);
  p->inverse = fftw_plan_many_dft(dim_, dims.data(), howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1,
                                  FFTW_BACKWARD, flags);
  fftw_free(buf);
  if (!p->forward || !p->inverse)
    throw NumericalAbort("FFTW planning failed");
  return *plans_.emplace(howmany, std::move(p)).first->second;
}

void FourierGrid::forward(std::complex<double>* data, int howmany) const
{
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans(howmany).forward, d, d);
  const double scale = 1.0 / static_cast<double>(size_);
  for (std::size_t i = 0; i < size_ * howmany; ++i)
    data[i] *= scale;
}

void FourierGrid::inverse(std::complex<double>* data, int howmany) const
{
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans(howmany).inverse, d, d);
}

}  // namespace kinhydro
