#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace kinhydro::simd {

// Data-parallel inner loops of the collision tensor assembly, the pointwise
// quadratic collision term and the per-mode propagator updates. Each kernel has
// a scalar reference implementation and an AVX2/FMA variant; the variant is
// chosen once at runtime from the CPU features (KINHYDRO_SIMD=scalar forces the
// reference path).

/// out[g] = sum_{a,b} t[(g*n + a)*n + b] * x[a] * y[b] for g < n.
using BilinearFn = void (*)(const double* t, const double* x, const double* y, double* out, std::size_t n);

/// t[(g*n + a)*n + b] += scale * c[g] * a_vec[a] * b_vec[b] (rank-one update of a cube).
using Outer3Fn = void (*)(double* t, double scale, const double* c, const double* a_vec, const double* b_vec,
                          std::size_t n);

/// y = m x for a row-major n x n complex matrix.
using CMatVecFn = void (*)(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                           std::size_t n);

/// y += m x for a row-major n x n complex matrix.
using CMatVecAccFn = CMatVecFn;

struct KernelTable
{
  std::string_view name;
  BilinearFn bilinear;
  Outer3Fn outer3;
  CMatVecFn cmatvec;
  CMatVecAccFn cmatvec_acc;
};

/// Reference implementation, always available.
const KernelTable& scalar_kernels();
/// AVX2/FMA implementation; nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_kernels();
/// Kernels in use for this process.
const KernelTable& active();

namespace detail {
void bilinear_scalar(const double* t, const double* x, const double* y, double* out, std::size_t n);
void outer3_scalar(double* t, double scale, const double* c, const double* a, const double* b, std::size_t n);
void cmatvec_scalar(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                    std::size_t n);
void cmatvec_acc_scalar(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                        std::size_t n);

void bilinear_avx2(const double* t, const double* x, const double* y, double* out, std::size_t n);
void outer3_avx2(double* t, double scale, const double* c, const double* a, const double* b, std::size_t n);
void cmatvec_avx2(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                  std::size_t n);
void cmatvec_acc_avx2(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                      std::size_t n);
}  // namespace detail

}  // namespace kinhydro::simd
