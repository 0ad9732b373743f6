#pragma once

#include <vector>

#include "hamstab/linalg.hpp"

namespace hamstab {

struct Tolerances {
  static constexpr double symplectic = 1e-9;
  static constexpr double frame = 1e-10;
  static constexpr double rank = 1e-10;
};

/// True iff ||M^T J M - J||_max <= tol. Throws DimensionError for non-square
/// or odd-dimensional input.
bool is_symplectic(const Mat& m, double tol = Tolerances::symplectic);

/// True iff Z = (X; Y) has X^T Y symmetric within frame_tol and full column
/// rank (smallest singular value > rank_tol).
bool check_lagrangian_frame(const Mat& z, double frame_tol = Tolerances::frame,
                            double rank_tol = Tolerances::rank);

/// A 2n x n matrix whose columns span a Lagrangian subspace. Construction
/// validates the frame; the columns are stored as given (not orthonormalized)
/// so determinant conventions of callers are preserved.
class LagrangianFrame {
public:
  explicit LagrangianFrame(Mat columns, double frame_tol = Tolerances::frame,
                           double rank_tol = Tolerances::rank);

  int n() const { return static_cast<int>(columns_.cols()); }
  const Mat& columns() const { return columns_; }
  Mat orthonormalized() const { return orthonormal_columns(columns_); }

private:
  Mat columns_;
};

/// det of the 2n x 2n matrix (Za | Zb).
double frame_pair_det(const LagrangianFrame& za, const LagrangianFrame& zb);
double frame_pair_det(const Mat& za, const Mat& zb);

/// A pair of Lagrangian boundary subspaces together with its normal form:
/// an orthogonal-symplectic U and angles theta (ascending, each in
/// (-pi/2, pi/2]) such that U*(I;0) spans V0 and U*(C(theta);S(theta))
/// spans V1.
struct BoundaryPair {
  LagrangianFrame v0;
  LagrangianFrame v1;
  Vec theta;
  Mat basis_change;  // U

  int n() const { return v0.n(); }
  /// The normal-form frame (C(theta); S(theta)) of V1, 2n x n.
  Mat normal_v1_frame() const;
};

BoundaryPair normalize_boundary_pair(const LagrangianFrame& v0, const LagrangianFrame& v1);

/// Boundary pair already in normal form: V0 = span(I;0),
/// V1 = span(C(theta);S(theta)). Angles may be in any order and branch;
/// frames are built from them as given, then normalized.
BoundaryPair boundary_from_angles(const Vec& theta);

/// Data of a time-reversal symmetry: N orthogonal with N^2 = I, NJ = -JN,
/// and S symplectic-orthogonal with N S^T = S N. `basis_change` is an
/// orthogonal-symplectic Omega with Omega^T N Omega = diag(I, -I) and
/// Omega^T S Omega = R(theta_S).
struct BrakeSymmetryData {
  Mat n_matrix;
  Mat s_matrix;
  Vec theta_s;  // ascending, each in (-pi, pi]
  Mat basis_change;

  int n() const { return static_cast<int>(n_matrix.rows()) / 2; }

  static BrakeSymmetryData from(const Mat& n_mat, const Mat& s_mat, double tol = 1e-10);
};

}  // namespace hamstab
