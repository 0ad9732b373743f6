#include "hamstab/trace.hpp"

#include <cmath>

#include "hamstab/errors.hpp"
#include "hamstab/quadrature.hpp"

namespace hamstab {

std::pair<Mat, Mat> g_matrices(const HillData& hill, const IteratedIntegrals& integrals) {
  if (integrals.order < 2) throw DimensionError("g_matrices: need M_1 and M_2");
  if (hill.p.rows() != integrals.m(1).rows()) throw DimensionError("g_matrices: mismatched n");
  Eigen::PartialPivLU<Mat> lu(hill.p);
  const Mat g1 = lu.solve(integrals.m(1) * hill.z0ext);
  const Mat g2 = lu.solve(integrals.m(2) * hill.z0ext);
  return {g1, g2};
}

TraceReport trace_powers(const Mat& g1, const Mat& g2) {
  TraceReport rep;
  rep.g1 = g1;
  rep.g2 = g2;
  rep.tr1 = -g1.trace();
  rep.tr2 = (g1 * g1).trace() - 2.0 * g2.trace();
  return rep;
}

namespace {

void compositions(int m, int k, std::vector<int>& cur, const std::vector<Mat>& g, double& acc) {
  if (k == 1) {
    Mat prod = g[static_cast<std::size_t>(m) - 1];
    for (auto it = cur.rbegin(); it != cur.rend(); ++it) {
      prod = g[static_cast<std::size_t>(*it) - 1] * prod;
    }
    acc += prod.trace();
    return;
  }
  for (int j = 1; j <= m - (k - 1); ++j) {
    cur.push_back(j);
    compositions(m - j, k - 1, cur, g, acc);
    cur.pop_back();
  }
}

}  // namespace

double trace_power_m(const std::vector<Mat>& g, int m) {
  if (m < 1 || static_cast<std::size_t>(m) > g.size()) {
    throw DimensionError("trace_power_m: need G_1..G_m");
  }
  double total = 0.0;
  for (int k = 1; k <= m; ++k) {
    double acc = 0.0;
    std::vector<int> cur;
    compositions(m, k, cur, g, acc);
    total += (k % 2 == 0 ? 1.0 : -1.0) / k * acc;
  }
  return m * total;
}

double constant_coefficient_trace(double nu, const CoefficientPath& d,
                                  const BoundaryPair& boundary, double tol) {
  const int n = boundary.n();
  if (d.n() != n) throw DimensionError("constant_coefficient_trace: mismatched n");
  const double horizon = d.length();

  const CoefficientPath dt = d.conjugated(boundary.basis_change);
  const Mat j = symplectic_form(n);

  for (int k = 0; k < n; ++k) {
    if (std::abs(std::sin(boundary.theta(k) - horizon * nu)) < 1e-10) {
      throw DegenerateBaseProblem("resonance: sin(theta_j - T nu) vanishes for j = " +
                                  std::to_string(k));
    }
  }

  // J^2 = -I, so e^{nu J t} = cos(nu t) I + sin(nu t) J exactly.
  const Mat id = Mat::Identity(2 * n, 2 * n);
  auto rotated = [&](double t) -> Mat {
    const double c = std::cos(nu * t);
    const double s = std::sin(nu * t);
    return (c * id - s * j) * dt(t) * (c * id + s * j);
  };

  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double cot =
        std::cos(boundary.theta(k) - horizon * nu) / std::sin(boundary.theta(k) - horizon * nu);
    const double diag_term = adaptive_integrate(
        [&](double t) { return rotated(t)(k, k); }, 0.0, horizon, tol, dt.kink_points());
    const double cross_term = adaptive_integrate(
        [&](double t) { return rotated(t)(k, n + k); }, 0.0, horizon, tol, dt.kink_points());
    total += cot * diag_term + cross_term;
  }
  return total;
}

TraceReport lagrangian_trace_report(const CoefficientPath& b, const CoefficientPath& d,
                                    const BoundaryPair& boundary, double tol) {
  const SymplecticPath gamma0 = fundamental_solution(b, tol);
  const HillData hill = transversality(boundary, gamma0);
  const IteratedIntegrals ii = iterated_integrals(gamma0, d, 2, tol);
  auto [g1, g2] = g_matrices(hill, ii);
  return trace_powers(g1, g2);
}

}  // namespace hamstab
