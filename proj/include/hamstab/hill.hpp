#pragma once

#include "hamstab/coeffs.hpp"
#include "hamstab/propagator.hpp"
#include "hamstab/symplectic.hpp"

namespace hamstab {

/// Projection data of the base boundary problem. P = (Z0, gamma0^{-1}(T) Z1)
/// is invertible exactly when V0 and gamma0^{-1}(T) V1 are transversal; Q is
/// the idempotent with kernel V0 and image gamma0^{-1}(T) V1.
struct HillData {
  Mat p;
  Mat qd;      // diag(I_n, 0_n)
  Mat q;       // P diag(0, I_n) P^{-1}
  Mat z0ext;   // (Z0 | 0_{2n x n}) = P qd
  double transversality;        // |det P|
  double degeneracy_threshold;  // rel_tol * ||P||_2^n
};

HillData transversality(const BoundaryPair& boundary, const SymplecticPath& gamma0,
                        double rel_tol = 1e-8);

/// f(alpha) = det(gamma_alpha(T) Z0, Z1) / det(gamma_0(T) Z0, Z1), where
/// gamma_alpha propagates B + alpha D. Independent of the frame
/// representatives of the boundary subspaces.
double hill_ratio(const CoefficientPath& b, const CoefficientPath& d,
                  const BoundaryPair& boundary, double alpha, double tol = 1e-11);

/// Sign of f(1). Both the base problem and the perturbed problem must be
/// nondegenerate.
int determinant_sign(const CoefficientPath& b, const CoefficientPath& d,
                     const BoundaryPair& boundary, double tol = 1e-11);

/// (gamma(T) Z0 | Z1), the 2n x 2n boundary matrix whose kernel carries the
/// boundary-value solutions.
Mat boundary_matrix(const Mat& monodromy, const BoundaryPair& boundary);

}  // namespace hamstab
