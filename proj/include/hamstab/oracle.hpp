#pragma once

#include <vector>

#include "hamstab/coeffs.hpp"
#include "hamstab/hill.hpp"
#include "hamstab/symplectic.hpp"

// Independent verification machinery: shooting eigenvalues, spectral-sum
// oracles, Galerkin-truncated determinants, and Morse indices by signed
// crossing counting. Everything here deliberately avoids the trace-formula
// path it is used to check.

namespace hamstab {

struct EigenvalueList {
  std::vector<double> values;  // ascending
  std::vector<int> multiplicities;
  std::vector<bool> suspected_even_order;  // found as a |det| dip, not a sign change
  double window_lo = 0.0;
  double window_hi = 0.0;
  double horizon = 0.0;  // T of the underlying problem
  int n = 0;

  std::size_t size() const { return values.size(); }
};

/// All eigenvalues of z' = J(B + lambda D) z with the pair boundary
/// conditions inside [lo, hi]: sign-bracketing of det(gamma_lambda(T) Z0, Z1)
/// on a coarse grid, bisection + polishing, multiplicities from the
/// near-kernel dimension. Even-order roots that the sign scan cannot see are
/// recovered from |det| dips (second-difference audit) and flagged.
EigenvalueList shoot_eigenvalues(const CoefficientPath& b, const CoefficientPath& d,
                                 const BoundaryPair& boundary, double lo, double hi,
                                 double tol = 1e-10);

struct EigenSumResult {
  double value;
  double tail_value;  // analytic continuation beyond the window
  double tail_bound;  // estimated error of the tail value
};

/// sum_j lambda_j^{-m} over the window plus a ladder-continuation tail
/// (asymptotic spacing pi/T per direction, Hurwitz-zeta closed form).
/// Throws WindowTooSmall when the achieved tail bound exceeds the request.
EigenSumResult eigen_sum(const EigenvalueList& eigs, int m, double tail_requested);

/// Hurwitz zeta sum_{k>=0} (k + a)^{-m} for integer m >= 2, a > 0.
double hurwitz_zeta(int m, double a);
/// trigamma(x) = hurwitz_zeta(2, x).
double trigamma(double x);

struct GalerkinTruncation {
  int truncation;                       // N
  std::vector<std::pair<int, int>> labels;  // (j, k), |k| <= N
  Mat matrix_b;                         // truncated form of A - B
  Mat matrix_bd;                        // truncated form of A - B - D
};

GalerkinTruncation galerkin_truncation(const CoefficientPath& b, const CoefficientPath& d,
                                       const BoundaryPair& boundary, int truncation);

/// det(matrix_bd) / det(matrix_b) on span{e_{j,k} : |k| <= N}; converges to
/// the Hill ratio at alpha = 1 as N grows.
double galerkin_determinant(const CoefficientPath& b, const CoefficientPath& d,
                            const BoundaryPair& boundary, int truncation);

struct Crossing {
  double s;
  int kernel_dim;
  bool even_order;
  int form_signature;  // signature of the crossing form on the kernel
};

struct MorseIndexResult {
  int index;
  std::vector<Crossing> crossings;
  bool parity_consistent = true;  // only meaningful for the relative index
};

/// Signed count of boundary-problem kernel crossings along s -> B + sD,
/// s in [0, 1): each crossing contributes the signature of the form
/// int <D phi, phi> dt on the kernel. Checked against the determinant parity;
/// a disagreement raises ParityMismatch rather than trusting either side.
MorseIndexResult relative_morse_index_detailed(const CoefficientPath& b,
                                               const CoefficientPath& d,
                                               const BoundaryPair& boundary, int grid = 200,
                                               double tol = 1e-10);
int relative_morse_index(const CoefficientPath& b, const CoefficientPath& d,
                         const BoundaryPair& boundary, int grid = 200, double tol = 1e-10);

/// Relative index of the S-periodic problem along s -> sB, s in [0, 1):
/// crossings of det(S gamma_{sB}(T) - I) plus the departure term at s = 0
/// (the form T <mean(B) xi, xi> on the constant solutions fixed by S).
MorseIndexResult periodic_morse_index_detailed(const CoefficientPath& b, const Mat& s_matrix,
                                               int grid = 200, double tol = 1e-10);
int periodic_morse_index(const CoefficientPath& b, const Mat& s_matrix, int grid = 200,
                         double tol = 1e-10);

/// Maslov-type indices from the periodic index: i_1 = I(S=I) - n,
/// i_{-1} = I(S=-I).
int maslov_index_plus_one(const CoefficientPath& b, int grid = 200, double tol = 1e-10);
int maslov_index_minus_one(const CoefficientPath& b, int grid = 200, double tol = 1e-10);

}  // namespace hamstab
