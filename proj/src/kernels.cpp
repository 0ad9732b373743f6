#include "hamstab/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

namespace hamstab::kernels {

namespace ref {

void axpy(double a, const double* x, double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += a * x[i];
}

double dot(const double* x, const double* y, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += x[i] * y[i];
  return s;
}

void ger(double a, const double* x, std::size_t m, const double* y,
         std::size_t ncols, double* A, std::size_t lda) {
  for (std::size_t i = 0; i < m; ++i) {
    const double ax = a * x[i];
    double* row = A + i * lda;
    for (std::size_t j = 0; j < ncols; ++j) row[j] += ax * y[j];
  }
}

double wdot2(const double* w, const double* x, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += w[i] * x[i] * x[i];
  return s;
}

}  // namespace ref

namespace {

struct Vtable {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*ger)(double, const double*, std::size_t, const double*, std::size_t,
              double*, std::size_t);
  double (*wdot2)(const double*, const double*, std::size_t);
  Isa isa;
};

Vtable pick() {
  const char* env = std::getenv("HAMSTAB_KERNELS");
  std::string want = env ? env : "auto";

  if (want != "scalar") {
#if defined(__x86_64__) || defined(_M_X64)
    bool have_avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if ((want == "auto" && have_avx2) || (want == "avx2" && have_avx2)) {
      return {avx2::axpy, avx2::dot, avx2::ger, avx2::wdot2, Isa::avx2};
    }
#endif
#if defined(__aarch64__)
    if (want == "auto" || want == "neon") {
      return {neon::axpy, neon::dot, neon::ger, neon::wdot2, Isa::neon};
    }
#endif
  }
  return {ref::axpy, ref::dot, ref::ger, ref::wdot2, Isa::scalar};
}

const Vtable& table() {
  static const Vtable t = pick();
  return t;
}

}  // namespace

Isa active() { return table().isa; }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    default: return "scalar";
  }
}

void axpy(double a, const double* x, double* y, std::size_t len) {
  table().axpy(a, x, y, len);
}

double dot(const double* x, const double* y, std::size_t len) {
  return table().dot(x, y, len);
}

void ger(double a, const double* x, std::size_t m, const double* y,
         std::size_t ncols, double* A, std::size_t lda) {
  table().ger(a, x, m, y, ncols, A, lda);
}

double wdot2(const double* w, const double* x, std::size_t len) {
  return table().wdot2(w, x, len);
}

}  // namespace hamstab::kernels
