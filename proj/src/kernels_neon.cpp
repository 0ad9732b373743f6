// NEON variants for aarch64, where 128-bit SIMD is baseline.

#include "hamstab/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace hamstab::kernels::neon {

void axpy(double a, const double* x, double* y, std::size_t len) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vfmaq_f64(vy, va, vld1q_f64(x + i));
    vst1q_f64(y + i, vy);
  }
  for (; i < len; ++i) y[i] += a * x[i];
}

double dot(const double* x, const double* y, std::size_t len) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < len; ++i) s += x[i] * y[i];
  return s;
}

void ger(double a, const double* x, std::size_t m, const double* y,
         std::size_t ncols, double* A, std::size_t lda) {
  for (std::size_t i = 0; i < m; ++i) {
    const double ax = a * x[i];
    const float64x2_t vax = vdupq_n_f64(ax);
    double* row = A + i * lda;
    std::size_t j = 0;
    for (; j + 4 <= ncols; j += 4) {
      float64x2_t r0 = vld1q_f64(row + j);
      float64x2_t r1 = vld1q_f64(row + j + 2);
      r0 = vfmaq_f64(r0, vax, vld1q_f64(y + j));
      r1 = vfmaq_f64(r1, vax, vld1q_f64(y + j + 2));
      vst1q_f64(row + j, r0);
      vst1q_f64(row + j + 2, r1);
    }
    for (; j < ncols; ++j) row[j] += ax * y[j];
  }
}

double wdot2(const double* w, const double* x, std::size_t len) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(w + i), vx), vx);
  }
  double s = vaddvq_f64(acc);
  for (; i < len; ++i) s += w[i] * x[i] * x[i];
  return s;
}

}  // namespace hamstab::kernels::neon

#endif  // aarch64
