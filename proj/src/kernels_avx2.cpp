// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma;
// callers must route through the dispatch table so these bodies never run on
// hardware without the instructions.

#include "hamstab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace hamstab::kernels::avx2 {

void axpy(double a, const double* x, double* y, std::size_t len) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < len; ++i) y[i] += a * x[i];
}

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= len; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) s += x[i] * y[i];
  return s;
}

void ger(double a, const double* x, std::size_t m, const double* y,
         std::size_t ncols, double* A, std::size_t lda) {
  for (std::size_t i = 0; i < m; ++i) {
    const double ax = a * x[i];
    const __m256d vax = _mm256_set1_pd(ax);
    double* row = A + i * lda;
    std::size_t j = 0;
    for (; j + 8 <= ncols; j += 8) {
      __m256d r0 = _mm256_loadu_pd(row + j);
      __m256d r1 = _mm256_loadu_pd(row + j + 4);
      r0 = _mm256_fmadd_pd(vax, _mm256_loadu_pd(y + j), r0);
      r1 = _mm256_fmadd_pd(vax, _mm256_loadu_pd(y + j + 4), r1);
      _mm256_storeu_pd(row + j, r0);
      _mm256_storeu_pd(row + j + 4, r1);
    }
    for (; j + 4 <= ncols; j += 4) {
      __m256d r0 = _mm256_loadu_pd(row + j);
      r0 = _mm256_fmadd_pd(vax, _mm256_loadu_pd(y + j), r0);
      _mm256_storeu_pd(row + j, r0);
    }
    for (; j < ncols; ++j) row[j] += ax * y[j];
  }
}

double wdot2(const double* w, const double* x, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), vx), vx, acc);
  }
  double s = hsum(acc);
  for (; i < len; ++i) s += w[i] * x[i] * x[i];
  return s;
}

}  // namespace hamstab::kernels::avx2

#endif  // x86_64
