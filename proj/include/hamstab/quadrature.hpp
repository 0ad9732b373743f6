#pragma once

#include <functional>
#include <vector>

#include "hamstab/linalg.hpp"

namespace hamstab {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (nodes by Newton iteration on P_p).
const GaussRule& gauss_rule(int order);

/// Splits [a, b] at the interior kink points, then integrates each smooth
/// piece with panel-doubling Gauss-Legendre until successive refinements
/// agree to `tol` (absolute, with a relative guard against large values).
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol, const std::vector<double>& kinks = {});

Mat adaptive_integrate_matrix(const std::function<Mat(double)>& f, double a, double b,
                              double tol, const std::vector<double>& kinks = {});

/// Fixed composite rule: `panels` equal panels of the given order on [a, b].
Mat panel_integrate_matrix(const std::function<Mat(double)>& f, double a, double b,
                           int panels, int order);

}  // namespace hamstab
