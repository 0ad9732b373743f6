#pragma once

#include <vector>

#include "hamstab/coeffs.hpp"
#include "hamstab/linalg.hpp"

namespace hamstab {

/// Fundamental solution gamma(t) of z' = J B(t) z sampled on the integration
/// grid, gamma(0) = I. Immutable after construction; safe to share across
/// threads. `dense_eval` interpolates between grid points (cubic Hermite on
/// the accepted steps); grid values themselves carry the integrator's full
/// accuracy, and the grid always contains every declared kink point.
class SymplecticPath {
public:
  SymplecticPath(CoefficientPath generator, std::vector<double> times, std::vector<Mat> values,
                 std::vector<Mat> derivs, double accuracy, double defect);

  int n() const { return generator_.n(); }
  double length() const { return times_.back(); }
  const CoefficientPath& generator() const { return generator_; }

  std::size_t grid_size() const { return times_.size(); }
  double time(std::size_t i) const { return times_[i]; }
  const Mat& value(std::size_t i) const { return values_[i]; }
  const Mat& monodromy() const { return values_.back(); }

  /// Index of an exact grid time within `tol`, or -1.
  std::ptrdiff_t grid_index(double t, double tol = 1e-12) const;

  Mat dense_eval(double t) const;

  /// Estimated global relative error of the grid values.
  double accuracy() const { return accuracy_; }
  /// Largest relative symplectic defect observed along the grid.
  double symplectic_defect_rel() const { return defect_; }

private:
  CoefficientPath generator_;
  std::vector<double> times_;
  std::vector<Mat> values_;
  std::vector<Mat> derivs_;
  double accuracy_;
  double defect_;
};

/// Integrates gamma' = J B(t) gamma on [0, B.length()] with estimated global
/// relative error <= tol. The grid is refined to include all kink points of
/// B plus any `forced_times`. Throws StiffnessError on step-size underflow
/// and AccuracyError when the symplectic defect exceeds 100 x tol.
SymplecticPath fundamental_solution(const CoefficientPath& coeffs, double tol,
                                    const std::vector<double>& forced_times = {});

struct IteratedIntegrals {
  int order;
  std::vector<Mat> matrices;  // M_1 ... M_order

  const Mat& m(int j) const { return matrices.at(static_cast<std::size_t>(j) - 1); }
};

/// Ordered iterated integrals M_j of the perturbation D against the base
/// flow: with Dhat(t) = gamma0(t)^T D(t) gamma0(t), the M_j solve the
/// augmented system M_j' = J Dhat M_{j-1}, M_0 = I, M_j(0) = 0, co-integrated
/// with the base flow itself so no interpolation error enters.
IteratedIntegrals iterated_integrals(const SymplecticPath& gamma0, const CoefficientPath& d,
                                     int order, double tol = 1e-11);

}  // namespace hamstab
