#include "hamstab/hill.hpp"
#include <cstdio>

#include <cmath>

#include "hamstab/errors.hpp"

namespace hamstab {

Mat boundary_matrix(const Mat& monodromy, const BoundaryPair& boundary) {
  const int n = boundary.n();
  Mat u(2 * n, 2 * n);
  u << monodromy * boundary.v0.columns(), boundary.v1.columns();
  return u;
}

HillData transversality(const BoundaryPair& boundary, const SymplecticPath& gamma0,
                        double rel_tol) {
  if (boundary.n() != gamma0.n()) throw DimensionError("transversality: mismatched n");
  const int n = boundary.n();

  const Mat ginv = symplectic_inverse(gamma0.monodromy());
  Mat p(2 * n, 2 * n);
  p << boundary.v0.columns(), ginv * boundary.v1.columns();

  HillData data;
  data.p = p;
  data.qd = Mat::Zero(2 * n, 2 * n);
  data.qd.topLeftCorner(n, n) = Mat::Identity(n, n);
  data.z0ext = Mat::Zero(2 * n, 2 * n);
  data.z0ext.leftCols(n) = boundary.v0.columns();

  const DetResult det = lu_det(p);
  data.transversality = std::abs(det.value);
  const auto [smin, smax] = extreme_singular_values(p);
  data.degeneracy_threshold = rel_tol * std::pow(smax, n);
  if (!(data.transversality > data.degeneracy_threshold)) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "base problem degenerate: |det P| = %.3e below threshold %.3e "
                  "(sigma_min/sigma_max = %.3e)",
                  data.transversality, data.degeneracy_threshold,
                  smax > 0 ? smin / smax : 0.0);
    throw DegenerateBaseProblem(msg);
  }

  Mat qn = Mat::Zero(2 * n, 2 * n);
  qn.bottomRightCorner(n, n) = Mat::Identity(n, n);
  Eigen::PartialPivLU<Mat> lu(p);
  data.q = p * qn * lu.inverse();
  return data;
}

double hill_ratio(const CoefficientPath& b, const CoefficientPath& d,
                  const BoundaryPair& boundary, double alpha, double tol) {
  const SymplecticPath gamma0 = fundamental_solution(b, tol);
  transversality(boundary, gamma0);  // throws if the base problem is degenerate

  const double denom = lu_det(boundary_matrix(gamma0.monodromy(), boundary)).value;
  if (alpha == 0.0) return 1.0;

  const SymplecticPath gamma_a = fundamental_solution(b.plus(d, alpha), tol);
  const double numer = lu_det(boundary_matrix(gamma_a.monodromy(), boundary)).value;
  return numer / denom;
}

int determinant_sign(const CoefficientPath& b, const CoefficientPath& d,
                     const BoundaryPair& boundary, double tol) {
  const SymplecticPath gamma0 = fundamental_solution(b, tol);
  const SymplecticPath gamma1 = fundamental_solution(b.plus(d, 1.0), tol);
  try {
    transversality(boundary, gamma0);
  } catch (const DegenerateBaseProblem& e) {
    throw DegenerateEndpoint(std::string("base endpoint degenerate: ") + e.what());
  }

  // Endpoint check for the perturbed problem: (gamma_1(T) Z0 | Z1) singular
  // means A - B - D is degenerate.
  const Mat u1 = boundary_matrix(gamma1.monodromy(), boundary);
  const auto [smin, smax] = extreme_singular_values(u1);
  if (smin <= 1e-10 * std::max(1.0, smax)) {
    throw DegenerateEndpoint("perturbed endpoint degenerate: boundary matrix singular");
  }

  const double f1 = lu_det(u1).value / lu_det(boundary_matrix(gamma0.monodromy(), boundary)).value;
  return f1 > 0.0 ? 1 : -1;
}

}  // namespace hamstab
