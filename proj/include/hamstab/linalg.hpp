#pragma once

#include <Eigen/Dense>
#include <utility>

namespace hamstab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

/// Standard symplectic form J = [[0, -I], [I, 0]] of size 2n x 2n.
Mat symplectic_form(int n);

double max_abs(const Mat& m);

/// ||M^T J M - J||_max for square M of even dimension.
double symplectic_defect(const Mat& m);

/// Inverse of a symplectic matrix via -J M^T J. Cheap and does not amplify
/// roundoff the way an LU inverse of an ill-conditioned M would.
Mat symplectic_inverse(const Mat& m);

struct DetResult {
  double value;    // may over/underflow for large dimensions; see log_abs
  double log_abs;  // log |det|
  int sign;        // -1, 0, +1
};

/// Determinant via partially pivoted LU.
DetResult lu_det(const Mat& m);

/// Columns of `frame` replaced by an orthonormal basis of their span
/// (Householder QR, R diagonal forced positive so the result is
/// deterministic and an already-orthonormal input is reproduced).
Mat orthonormal_columns(const Mat& frame);

/// Spectral-norm distance between the orthogonal projectors onto the column
/// spans of A and B.
double subspace_distance(const Mat& a, const Mat& b);

/// Signature (n+ minus n-) of a small symmetric matrix; eigenvalues with
/// |lambda| <= tol * max(1, |lambda|_max) count as zero. Returns the number
/// of zero eigenvalues in `zeros`.
int signature(const Mat& sym, double tol, int* zeros = nullptr);

/// (sigma_min, sigma_max) of an arbitrary matrix.
std::pair<double, double> extreme_singular_values(const Mat& m);

/// Simultaneous orthogonal diagonalization of two commuting real symmetric
/// matrices. Returns Q with Q^T A Q and Q^T B Q diagonal; diagonal entries
/// are read off by the caller. Eigenvalue clusters of A are resolved by
/// diagonalizing B inside them.
Mat joint_diagonalizer(const Mat& a, const Mat& b, double cluster_tol = 1e-9);

/// Rotation-form symplectic matrix R(theta) = [[C, -S], [S, C]] with
/// C = diag(cos theta_j), S = diag(sin theta_j).
Mat rotation_matrix(const Vec& theta);

}  // namespace hamstab
