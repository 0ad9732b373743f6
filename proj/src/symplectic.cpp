#include "hamstab/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hamstab/errors.hpp"

namespace hamstab {

bool is_symplectic(const Mat& m, double tol) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw DimensionError("is_symplectic: matrix must be square of even dimension");
  }
  return symplectic_defect(m) <= tol;
}

bool check_lagrangian_frame(const Mat& z, double frame_tol, double rank_tol) {
  if (z.rows() == 0 || z.rows() % 2 != 0 || z.cols() != z.rows() / 2) {
    throw DimensionError("check_lagrangian_frame: expected a 2n x n matrix");
  }
  const int n = static_cast<int>(z.cols());
  const Mat x = z.topRows(n);
  const Mat y = z.bottomRows(n);
  const Mat xty = x.transpose() * y;
  if (max_abs(xty - xty.transpose()) > frame_tol) return false;
  const auto [smin, smax] = extreme_singular_values(z);
  (void)smax;
  return smin > rank_tol;
}

LagrangianFrame::LagrangianFrame(Mat columns, double frame_tol, double rank_tol)
    : columns_(std::move(columns)) {
  if (!check_lagrangian_frame(columns_, frame_tol, rank_tol)) {
    throw InvalidFrame("frame is not Lagrangian or is rank deficient");
  }
}

double frame_pair_det(const Mat& za, const Mat& zb) {
  if (za.rows() != zb.rows() || za.cols() != zb.cols()) {
    throw DimensionError("frame_pair_det: mismatched frame shapes");
  }
  Mat m(za.rows(), za.cols() + zb.cols());
  m << za, zb;
  return lu_det(m).value;
}

double frame_pair_det(const LagrangianFrame& za, const LagrangianFrame& zb) {
  return frame_pair_det(za.columns(), zb.columns());
}

namespace {

/// Complex n x n representative X + iY of an orthonormal Lagrangian frame.
CMat unitary_rep(const Mat& frame_orthonormal) {
  const int n = static_cast<int>(frame_orthonormal.cols());
  return frame_orthonormal.topRows(n).cast<std::complex<double>>() +
         std::complex<double>(0, 1) * frame_orthonormal.bottomRows(n).cast<std::complex<double>>();
}

/// 2n x 2n orthogonal symplectic matrix of a unitary W = A + iB.
Mat realify(const CMat& w) {
  const int n = static_cast<int>(w.rows());
  Mat u(2 * n, 2 * n);
  u.topLeftCorner(n, n) = w.real();
  u.topRightCorner(n, n) = -w.imag();
  u.bottomLeftCorner(n, n) = w.imag();
  u.bottomRightCorner(n, n) = w.real();
  return u;
}

double half_angle_branch(double b, double a) {
  double theta = 0.5 * std::atan2(b, a);
  // atan2 can land on -pi for b = -0.0; keep the branch (-pi/2, pi/2].
  if (theta <= -0.5 * M_PI + 1e-15) theta += M_PI;
  return theta;
}

}  // namespace

Mat BoundaryPair::normal_v1_frame() const {
  const int nn = n();
  Mat z(2 * nn, nn);
  z.setZero();
  for (int j = 0; j < nn; ++j) {
    z(j, j) = std::cos(theta(j));
    z(nn + j, j) = std::sin(theta(j));
  }
  return z;
}

BoundaryPair normalize_boundary_pair(const LagrangianFrame& v0, const LagrangianFrame& v1) {
  if (v0.n() != v1.n()) throw DimensionError("normalize_boundary_pair: mismatched n");
  const int n = v0.n();

  const CMat w0 = unitary_rep(v0.orthonormalized());
  const CMat w1 = unitary_rep(v1.orthonormalized());

  // Representative of V1 in the basis where V0 is horizontal.
  const CMat w = w0.adjoint() * w1;
  const CMat s = w * w.transpose();  // symmetric unitary; eigenvalues e^{2 i theta_j}
  const Mat q = joint_diagonalizer(s.real(), s.imag());

  Vec theta(n);
  for (int j = 0; j < n; ++j) {
    const double a = q.col(j).dot(s.real() * q.col(j));
    const double b = q.col(j).dot(s.imag() * q.col(j));
    theta(j) = half_angle_branch(b, a);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return theta(i) < theta(j); });

  Vec theta_sorted(n);
  Mat q_sorted(n, n);
  for (int j = 0; j < n; ++j) {
    theta_sorted(j) = theta(order[j]);
    q_sorted.col(j) = q.col(order[j]);
  }

  const Mat u = realify(w0) * realify(q_sorted.cast<std::complex<double>>());

  BoundaryPair pair{v0, v1, theta_sorted, u};

  // The construction is exact in exact arithmetic; audit it numerically.
  const Mat horizontal = u.leftCols(n);
  if (subspace_distance(horizontal, v0.columns()) > 1e-8 ||
      subspace_distance(u * pair.normal_v1_frame(), v1.columns()) > 1e-8) {
    throw InvalidFrame("normalize_boundary_pair: normal form failed the subspace audit");
  }
  return pair;
}

BoundaryPair boundary_from_angles(const Vec& theta) {
  const int n = static_cast<int>(theta.size());
  Mat z0 = Mat::Zero(2 * n, n);
  z0.topRows(n) = Mat::Identity(n, n);
  Mat z1(2 * n, n);
  z1.setZero();
  for (int j = 0; j < n; ++j) {
    z1(j, j) = std::cos(theta(j));
    z1(n + j, j) = std::sin(theta(j));
  }
  return normalize_boundary_pair(LagrangianFrame(z0), LagrangianFrame(z1));
}

BrakeSymmetryData BrakeSymmetryData::from(const Mat& n_mat, const Mat& s_mat, double tol) {
  if (n_mat.rows() != n_mat.cols() || n_mat.rows() % 2 != 0 || n_mat.rows() == 0 ||
      s_mat.rows() != n_mat.rows() || s_mat.cols() != n_mat.cols()) {
    throw DimensionError("BrakeSymmetryData: N and S must be square 2n x 2n");
  }
  const int n = static_cast<int>(n_mat.rows()) / 2;
  const Mat id = Mat::Identity(2 * n, 2 * n);
  const Mat j = symplectic_form(n);

  if (max_abs(n_mat * n_mat - id) > tol || max_abs(n_mat.transpose() * n_mat - id) > tol ||
      max_abs(n_mat * j + j * n_mat) > tol) {
    throw InvalidSymmetry("N must be orthogonal with N^2 = I and NJ = -JN");
  }
  if (max_abs(s_mat.transpose() * s_mat - id) > tol || symplectic_defect(s_mat) > tol ||
      max_abs(n_mat * s_mat.transpose() - s_mat * n_mat) > tol) {
    throw InvalidSymmetry("S must be symplectic-orthogonal with N S^T = S N");
  }

  // Basis in which N = diag(I, -I): columns of V+(N), completed by J V+(N).
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (n_mat + n_mat.transpose()));
  Mat plus(2 * n, n);
  int got = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0) {
      if (got == n) throw InvalidSymmetry("N eigenspaces are not n-dimensional");
      plus.col(got++) = es.eigenvectors().col(i);
    }
  }
  if (got != n) throw InvalidSymmetry("N eigenspaces are not n-dimensional");

  Mat omega(2 * n, 2 * n);
  omega.leftCols(n) = plus;
  omega.rightCols(n) = j * plus;

  // S in the new basis commutes with J: [[C, -D], [D, C]] with C, D symmetric
  // and commuting.
  const Mat s1 = omega.transpose() * s_mat * omega;
  const Mat c = s1.topLeftCorner(n, n);
  const Mat d = s1.bottomLeftCorner(n, n);
  const Mat o = joint_diagonalizer(c, d);

  Vec theta(n);
  for (int k = 0; k < n; ++k) {
    const double a = o.col(k).dot(c * o.col(k));
    const double b = o.col(k).dot(d * o.col(k));
    theta(k) = std::atan2(b, a);
    if (theta(k) <= -M_PI + 1e-15) theta(k) = M_PI;
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int k) { return theta(i) < theta(k); });
  Vec theta_sorted(n);
  Mat o_sorted(n, n);
  for (int k = 0; k < n; ++k) {
    theta_sorted(k) = theta(order[k]);
    o_sorted.col(k) = o.col(order[k]);
  }

  Mat mix = Mat::Zero(2 * n, 2 * n);
  mix.topLeftCorner(n, n) = o_sorted;
  mix.bottomRightCorner(n, n) = o_sorted;
  omega = omega * mix;

  BrakeSymmetryData data{n_mat, s_mat, theta_sorted, omega};

  const Mat half = rotation_matrix(0.5 * theta_sorted);
  if (max_abs(half * half - omega.transpose() * s_mat * omega) > 1e-9) {
    throw InvalidSymmetry("rotation normal form audit failed: R(theta/2)^2 != S");
  }
  return data;
}

}  // namespace hamstab
