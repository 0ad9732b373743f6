#pragma once

#include "hamstab/coeffs.hpp"
#include "hamstab/symplectic.hpp"

namespace hamstab {

/// True iff N B(T-t) = B(t) N and N D(T-t) = D(t) N for a dense sample of t.
bool check_brake_symmetry(const CoefficientPath& b, const CoefficientPath& d,
                          const BrakeSymmetryData& sym, double tol = 1e-10, int samples = 201);

/// The two half-period boundary pairs of the symmetry splitting: the `plus`
/// problem runs from V+(SN) to V+(N), the `minus` problem from V-(SN) to
/// V-(N), both on [0, T/2].
struct SplitBoundaries {
  BoundaryPair plus;
  BoundaryPair minus;
  double half_period;
};

SplitBoundaries split_boundaries(const BrakeSymmetryData& sym, double period);

/// Everything the splitting identities relate, evaluated independently:
/// the S-periodic determinant ratio, the two half-period ratios, and the
/// block determinants of M_hat = gamma(T/2) R(theta/2).
struct DecompositionReport {
  double periodic_ratio;      // det(S gamma_1(T) - I) / det(S gamma_0(T) - I)
  double half_ratio_plus;
  double half_ratio_minus;
  double det_b[2];            // top-right block of M_hat, at lambda = 0, 1
  double det_c[2];            // bottom-left block
  double periodic_det[2];     // det(S gamma_lambda(T) - I)
  double product_residual;    // |periodic_ratio - plus * minus| (relative)
  double block_residual[2];   // |periodic_det - (-1)^n 2^{2n} det_b det_c| (relative)
};

DecompositionReport decomposition_check(const CoefficientPath& b, const CoefficientPath& d,
                                        const BrakeSymmetryData& sym, double tol = 1e-11);

}  // namespace hamstab
