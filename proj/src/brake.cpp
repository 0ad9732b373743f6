#include "hamstab/brake.hpp"

#include <cmath>

#include "hamstab/errors.hpp"
#include "hamstab/propagator.hpp"

namespace hamstab {

bool check_brake_symmetry(const CoefficientPath& b, const CoefficientPath& d,
                          const BrakeSymmetryData& sym, double tol, int samples) {
  if (b.n() != sym.n() || d.n() > b.n()) {
    throw DimensionError("check_brake_symmetry: mismatched dimensions");
  }
  const Mat& nm = sym.n_matrix;
  const double period = b.length();
  for (int i = 0; i < samples; ++i) {
    const double t = period * i / (samples - 1.0);
    if (max_abs(nm * b(period - t) - b(t) * nm) > tol) return false;
    if (max_abs(nm * d(period - t) - d(t) * nm) > tol) return false;
  }
  return true;
}

SplitBoundaries split_boundaries(const BrakeSymmetryData& sym, double period) {
  const int n = sym.n();
  const Mat half_rot = rotation_matrix(0.5 * sym.theta_s);
  const Mat& omega = sym.basis_change;

  Mat z_plus = Mat::Zero(2 * n, n);
  z_plus.topRows(n) = Mat::Identity(n, n);
  Mat z_minus = Mat::Zero(2 * n, n);
  z_minus.bottomRows(n) = Mat::Identity(n, n);

  const LagrangianFrame v_plus_n(omega * z_plus);
  const LagrangianFrame v_minus_n(omega * z_minus);
  const LagrangianFrame v_plus_sn(omega * half_rot * z_plus);
  const LagrangianFrame v_minus_sn(omega * half_rot * z_minus);

  return {normalize_boundary_pair(v_plus_sn, v_plus_n),
          normalize_boundary_pair(v_minus_sn, v_minus_n), 0.5 * period};
}

DecompositionReport decomposition_check(const CoefficientPath& b, const CoefficientPath& d,
                                        const BrakeSymmetryData& sym, double tol) {
  if (!check_brake_symmetry(b, d, sym)) {
    throw InvalidSymmetry("decomposition_check: coefficients are not brake symmetric");
  }
  const int n = sym.n();
  const double period = b.length();
  const double half = 0.5 * period;
  const Mat id = Mat::Identity(2 * n, 2 * n);

  // Work in the normalized basis: N = diag(I, -I), S = R(theta). A single
  // full-period propagation per lambda serves the periodic determinant, the
  // half-period ratios, and the block identity.
  const Mat& omega = sym.basis_change;
  const Mat s_norm = omega.transpose() * sym.s_matrix * omega;
  const CoefficientPath b_norm = b.conjugated(omega);
  const CoefficientPath d_norm = d.conjugated(omega);
  const Mat half_rot = rotation_matrix(0.5 * sym.theta_s);

  Mat z_plus = Mat::Zero(2 * n, n);
  z_plus.topRows(n) = Mat::Identity(n, n);
  Mat z_minus = Mat::Zero(2 * n, n);
  z_minus.bottomRows(n) = Mat::Identity(n, n);
  const Mat zhat_plus = half_rot * z_plus;
  const Mat zhat_minus = half_rot * z_minus;

  DecompositionReport rep{};
  double half_plus[2], half_minus[2];

  for (int lam = 0; lam <= 1; ++lam) {
    const CoefficientPath coeffs = lam == 0 ? b_norm : b_norm.plus(d_norm, 1.0);
    const SymplecticPath gamma = fundamental_solution(coeffs, tol, {half});
    const std::ptrdiff_t ih = gamma.grid_index(half, 1e-10 * period);
    const Mat g_half = ih >= 0 ? gamma.value(static_cast<std::size_t>(ih))
                               : gamma.dense_eval(half);

    rep.periodic_det[lam] = lu_det(s_norm * gamma.monodromy() - id).value;

    const Mat m_hat = g_half * half_rot;
    rep.det_b[lam] = lu_det(Mat(m_hat.topRightCorner(n, n))).value;
    rep.det_c[lam] = lu_det(Mat(m_hat.bottomLeftCorner(n, n))).value;

    half_plus[lam] = frame_pair_det(g_half * zhat_plus, z_plus);
    half_minus[lam] = frame_pair_det(g_half * zhat_minus, z_minus);
  }

  const double scale_p = std::abs(rep.periodic_det[0]);
  if (scale_p < 1e-10) throw DegenerateFactor("decomposition_check: periodic base degenerate");
  if (std::abs(half_plus[0]) < 1e-10) {
    throw DegenerateFactor("decomposition_check: plus half-period base degenerate");
  }
  if (std::abs(half_minus[0]) < 1e-10) {
    throw DegenerateFactor("decomposition_check: minus half-period base degenerate");
  }

  rep.periodic_ratio = rep.periodic_det[1] / rep.periodic_det[0];
  rep.half_ratio_plus = half_plus[1] / half_plus[0];
  rep.half_ratio_minus = half_minus[1] / half_minus[0];

  rep.product_residual = std::abs(rep.periodic_ratio - rep.half_ratio_plus * rep.half_ratio_minus) /
                         std::max(1.0, std::abs(rep.periodic_ratio));

  const double block_factor = ((n % 2 == 0) ? 1.0 : -1.0) * std::pow(2.0, 2 * n);
  for (int lam = 0; lam <= 1; ++lam) {
    rep.block_residual[lam] =
        std::abs(rep.periodic_det[lam] - block_factor * rep.det_b[lam] * rep.det_c[lam]) /
        std::max(1.0, std::abs(rep.periodic_det[lam]));
  }
  return rep;
}

}  // namespace hamstab
