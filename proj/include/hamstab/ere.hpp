#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hamstab/coeffs.hpp"
#include "hamstab/symplectic.hpp"

// Essential-part systems of elliptic relative equilibria of the planar
// three-body problem and the eccentricity bounds certifying their stability
// type. The 4x4 coefficient block is
//   B_e(t) = [[I2, -J2], [J2, I2 - r_e(t) R]],  r_e(t) = 1/(1 + e cos t),
// on [0, 2pi], with R the regularized Hessian of the central configuration:
// equilateral R = 3/2 I + sqrt(9-beta)/2 diag(1,-1), collinear
// R = diag(-delta, 2 delta + 3).

namespace hamstab {

enum class EREFamily { lagrange, euler };

struct EREConfig {
  EREFamily family = EREFamily::lagrange;
  double param = 0.0;  // beta in [0, 9] or delta >= 0
  double e = 0.0;      // eccentricity in [0, 1)
};

/// The 2x2 Hessian block R of the configuration.
Mat ere_hessian(const EREConfig& cfg);

/// B_e(t) on [0, 2pi]. Throws InvalidEccentricity unless 0 <= e < 1.
CoefficientPath meyer_schmidt_system(const EREConfig& cfg);

/// The time-reversal symmetry of every essential-part system:
/// N = diag(1, -1, -1, 1) together with S.
BrakeSymmetryData ere_brake_symmetry(const Mat& s_matrix);

/// Sign-split perturbation profiles K^+(t) >= 0 >= K^-(t) on [0, pi] with the
/// kink at pi/2 declared; K^+ + K^- = cos(t) K and the eccentricity
/// perturbation is D^{+/-} = e r_e(t) K^{+/-}.
std::pair<CoefficientPath, CoefficientPath> split_perturbation(const EREConfig& cfg);

/// The half-period boundary pair of the E^{+/-}_{-1} splitting: the plus
/// problem runs span{e2,e3} -> span{e1,e4}, the minus problem the reverse.
BoundaryPair ere_half_boundary(bool plus_space);

enum class CurveKind { f, g1, g2 };

struct PlusMinus {
  double plus;
  double minus;
};

/// Conditional trace of F^2 on E^+_{-1} and E^-_{-1} for the e = 0 base
/// system with the requested sign-split profile (f: equilateral with K^-;
/// g1/g2: collinear with K^+/K^-). One propagation serves both signs.
PlusMinus curve_value(const EREConfig& cfg, CurveKind which, double tol = 1e-11);

/// Certified eccentricity bound from a trace value: 1/(1 + sqrt(tr2)).
double eccentricity_bound(double tr2);

enum class Classification { certified_stable, certified_EH, uncertified };
const char* classification_name(Classification c);

/// Sufficient criteria: equilateral with beta in [0, 3/4) is certified
/// spectrally stable below the f-based bounds; collinear is certified
/// elliptic-hyperbolic below the g1-based bounds (first band) or all four
/// g-based bounds (interior bands).
Classification classify(const EREConfig& cfg);

struct EulerAnchors {
  double phi;  // +1-degeneracy curve value at e = 0
  double psi;  // -1-degeneracy pair value at e = 0
};

/// Closed forms phi_j(0), psi_j(0) of the collinear degeneracy curves.
EulerAnchors degeneracy_anchors(int j);

/// sigma_min(gamma_{param,0}(2pi) + I): zero exactly at a -1-degenerate
/// parameter.
double minus_one_degeneracy_gap(EREFamily family, double param, double tol = 1e-11);

/// Polishes the -1-degenerate parameter inside [lo, hi] by minimizing the
/// gap; returns the parameter and stores the residual gap if asked.
double polish_minus_one_degeneracy(EREFamily family, double lo, double hi,
                                   double* gap_out = nullptr);

struct RegionScanRow {
  double param;
  double curve_minus;     // bound from the E^- trace (f or g1)
  double curve_plus;      // bound from the E^+ trace
  double curve_g2_minus;  // collinear interior bands only, else NaN
  double curve_g2_plus;
  double curve;           // certified bound (pointwise minimum that applies)
  std::string tag;
};

struct RegionScan {
  EREFamily family;
  std::vector<RegionScanRow> rows;
};

/// Scans the parameter range ([0,9] or [0,7]) on `grid_points` points,
/// refining where the curve's second difference exceeds 1e-2. Rows are
/// computed in parallel and emitted in parameter order.
RegionScan region_scan(EREFamily family, int grid_points, double tol = 1e-10);

/// Number of monodromy eigenvalues on the unit circle (|mu| within tol of 1).
int unit_circle_eigen_count(const Mat& monodromy, double tol = 1e-8);

}  // namespace hamstab
