#include "kinhydro/simd/kernels.hpp"

#if defined(KINHYDRO_HAVE_AVX2)
#include <immintrin.h>

namespace kinhydro::simd::detail {

namespace {

inline double hsum(__m256d v)
{
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double dot(const double* a, const double* b, std::size_t n)
{
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j + 4), _mm256_loadu_pd(b + j + 4), acc1);
  }
  for (; j + 4 <= n; j += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; j < n; ++j)
    s += a[j] * b[j];
  return s;
}

// Complex dot of a row with x; both interleaved (re, im).
inline void cdot(const double* row, const double* x, std::size_t n, double& re, double& im)
{
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d r = _mm256_loadu_pd(row + 2 * j);
    const __m256d v = _mm256_loadu_pd(x + 2 * j);
    acc_re = _mm256_fmadd_pd(r, v, acc_re);
    acc_im = _mm256_fmadd_pd(r, _mm256_permute_pd(v, 0b0101), acc_im);
  }
  alignas(32) double a[4];
  alignas(32) double b[4];
  _mm256_store_pd(a, acc_re);
  _mm256_store_pd(b, acc_im);
  re = (a[0] - a[1]) + (a[2] - a[3]);
  im = (b[0] + b[1]) + (b[2] + b[3]);
  for (; j < n; ++j) {
    re += row[2 * j] * x[2 * j] - row[2 * j + 1] * x[2 * j + 1];
    im += row[2 * j] * x[2 * j + 1] + row[2 * j + 1] * x[2 * j];
  }
}

}  // namespace

void bilinear_avx2(const double* t, const double* x, const double* y, double* out, std::size_t n)
{
  for (std::size_t g = 0; g < n; ++g) {
    const double* slab = t + g * n * n;
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      acc += x[a] * dot(slab + a * n, y, n);
    out[g] = acc;
  }
}

void outer3_avx2(double* t, double scale, const double* c, const double* a, const double* b, std::size_t n)
{
  for (std::size_t g = 0; g < n; ++g) {
    const double sg = scale * c[g];
    double* slab = t + g * n * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = sg * a[i];
      const __m256d sv = _mm256_set1_pd(s);
      double* row = slab + i * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4)
        _mm256_storeu_pd(row + j, _mm256_fmadd_pd(sv, _mm256_loadu_pd(b + j), _mm256_loadu_pd(row + j)));
      for (; j < n; ++j)
        row[j] += s * b[j];
    }
  }
}

void cmatvec_avx2(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                  std::size_t n)
{
  const double* xr = reinterpret_cast<const double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    double re;
    double im;
    cdot(reinterpret_cast<const double*>(m + i * n), xr, n, re, im);
    y[i] = {re, im};
  }
}

void cmatvec_acc_avx2(const std::complex<double>* m, const std::complex<double>* x, std::complex<double>* y,
                      std::size_t n)
{
  const double* xr = reinterpret_cast<const double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    double re;
    double im;
    cdot(reinterpret_cast<const double*>(m + i * n), xr, n, re, im);
    y[i] += std::complex<double>(re, im);
  }
}

}  // namespace kinhydro::simd::detail

#endif
