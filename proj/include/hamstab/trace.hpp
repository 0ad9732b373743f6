#pragma once

#include <utility>
#include <vector>

#include "hamstab/hill.hpp"

namespace hamstab {

struct TraceReport {
  Mat g1;
  Mat g2;
  double tr1;  // conditional trace of F
  double tr2;  // conditional trace of F^2
  std::vector<std::pair<double, double>> f_samples;  // optional (alpha, f(alpha))
};

/// G_j = P^{-1} M_j (Z0 | 0).
std::pair<Mat, Mat> g_matrices(const HillData& hill, const IteratedIntegrals& integrals);

/// tr1 = -Tr(G1), tr2 = Tr(G1^2) - 2 Tr(G2).
TraceReport trace_powers(const Mat& g1, const Mat& g2);

/// Conditional trace of F^m from G_1..G_m via the composition sum
/// m * sum_{k=1..m} (-1)^k/k * sum_{j1+...+jk=m} Tr(G_{j1}...G_{jk}).
/// Only m in {1, 2} is exercised by the main pipeline.
double trace_power_m(const std::vector<Mat>& g, int m);

/// Closed form of the conditional trace for constant base coefficients
/// B = nu*I: sum_j cot(theta_j - T nu) * int (e^{-nu J t} D e^{nu J t} e_j, e_j)
/// + sum_j int (e^{-nu J t} D e^{nu J t} e_{n+j}, e_j). The boundary pair is
/// brought to its normal form first; D is conjugated along.
double constant_coefficient_trace(double nu, const CoefficientPath& d,
                                  const BoundaryPair& boundary, double tol = 1e-11);

/// Full pipeline: propagate the base flow, form the iterated integrals, and
/// assemble the trace report for the boundary problem (B, D, V0, V1).
TraceReport lagrangian_trace_report(const CoefficientPath& b, const CoefficientPath& d,
                                    const BoundaryPair& boundary, double tol = 1e-11);

}  // namespace hamstab
