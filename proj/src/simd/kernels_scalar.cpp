#include "kinhydro/simd/kernels.hpp"

namespace kinhydro::simd::detail {

void bilinear_scalar(const double* t, const double* x, const double* y, double* out, std::size_t n)
{
  for (std::size_t g = 0; g < n; ++g) {
    const double* slab = t + g * n * n;
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const double* row = slab + a * n;
      double dot = 0.0;
      for (std::size_t b = 0; b < n; ++b)
        dot += row[b] * y[b];
      acc += x[a] * dot;
    }
    out[g] = acc;
  }
}

void outer3_scalar(double* t, double scale, const double* c, const double* a, const double* b, std::size_t n)
{
  for (std::size_t g = 0; g < n; ++g) {
    const double sg = scale * c[g];
    double* slab = t + g * n * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = sg * a[i];
      double* row = slab + i * n;
      for (std::size_t j = 0; j < n; ++j)
        row[j] += s * b[j];
    }
  }
}

void cmatvec_scalar(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                    std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double>* row = m + i * n;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      re += row[j].real() * x[j].real() - row[j].imag() * x[j].imag();
      im += row[j].real() * x[j].imag() + row[j].imag() * x[j].real();
    }
    y[i] = {re, im};
  }
}

void cmatvec_acc_scalar(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                        std::size_t n)
{
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double>* row = m + i * n;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      re += row[j].real() * x[j].real() - row[j].imag() * x[j].imag();
      im += row[j].real() * x[j].imag() + row[j].imag() * x[j].real();
    }
    y[i] += std::complex<double>(re, im);
  }
}

}  // namespace kinhydro::simd::detail
