#pragma once

#include <cstddef>

// Dense inner-loop primitives used by the Galerkin assembly and the
// quadrature accumulators. Every primitive has a scalar reference
// implementation (kernels::ref) and, where the hardware provides them,
// AVX2/FMA or NEON variants. The active variant is picked once at runtime;
// HAMSTAB_KERNELS=scalar|avx2|neon|auto overrides the detection. The SIMD
// variants must agree with the reference ones to roundoff-reassociation
// level; tests/test_kernels.cpp enforces this.

namespace hamstab::kernels {

enum class Isa { scalar, avx2, neon };

/// Variant selected by dispatch for this process.
Isa active();
const char* isa_name(Isa isa);

/// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t len);

/// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t len);

/// Rank-1 update of a row-major matrix: A[i*lda + j] += a * x[i] * y[j],
/// i < m, j < ncols.
void ger(double a, const double* x, std::size_t m, const double* y,
         std::size_t ncols, double* A, std::size_t lda);

/// Weighted sum of squares: sum_i w[i] * x[i]^2 (crossing-form accumulator).
double wdot2(const double* w, const double* x, std::size_t len);

namespace ref {
void axpy(double a, const double* x, double* y, std::size_t len);
double dot(const double* x, const double* y, std::size_t len);
void ger(double a, const double* x, std::size_t m, const double* y,
         std::size_t ncols, double* A, std::size_t lda);
double wdot2(const double* w, const double* x, std::size_t len);
}  // namespace ref

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t len);
double dot(const double* x, const double* y, std::size_t len);
void ger(double a, const double* x, std::size_t m, const double* y,
         std::size_t ncols, double* A, std::size_t lda);
double wdot2(const double* w, const double* x, std::size_t len);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void axpy(double a, const double* x, double* y, std::size_t len);
double dot(const double* x, const double* y, std::size_t len);
void ger(double a, const double* x, std::size_t m, const double* y,
         std::size_t ncols, double* A, std::size_t lda);
double wdot2(const double* w, const double* x, std::size_t len);
}  // namespace neon
#endif

}  // namespace hamstab::kernels
