#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hamstab/linalg.hpp"

namespace hamstab {

/// A time-parametrized symmetric 2n x 2n coefficient matrix on [0, T],
/// continuous between its declared kink points. Evaluation is a pure
/// function; paths are cheap to copy (shared evaluator).
class CoefficientPath {
public:
  CoefficientPath() = default;
  CoefficientPath(int n, double length, std::function<Mat(double)> eval,
                  std::vector<double> kinks = {});

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  double length() const { return length_; }
  const std::vector<double>& kink_points() const { return kinks_; }

  Mat operator()(double t) const { return (*eval_)(t); }

  /// max over `samples` points of the symmetry defect of eval(t).
  double symmetry_defect(int samples = 33) const;

  static CoefficientPath zero(int n, double length);
  static CoefficientPath constant(const Mat& value, double length);

  CoefficientPath scaled(double c) const;
  /// this + alpha * other (same n; length = min of the two).
  CoefficientPath plus(const CoefficientPath& other, double alpha = 1.0) const;
  /// Restriction to [0, new_length].
  CoefficientPath restricted(double new_length) const;
  /// t -> U^T eval(t) U for a constant U.
  CoefficientPath conjugated(const Mat& u) const;
  /// J-commuting part (D - J D J)/2.
  CoefficientPath commuting_part() const;
  /// J-anticommuting part (D + J D J)/2.
  CoefficientPath anticommuting_part() const;

private:
  int n_ = 0;
  double length_ = 0.0;
  std::shared_ptr<const std::function<Mat(double)>> eval_;
  std::vector<double> kinks_;
};

/// Parses the sampled table format: optional comment/kink header lines
/// starting with '#', then rows "t  b_upper...  d_upper..." with strictly
/// increasing t covering [0, T]. Returns the pair (B, D) as piecewise-cubic
/// interpolants (natural splines between kinks).
std::pair<CoefficientPath, CoefficientPath> load_sampled_coefficients(const std::string& path);

/// Writes the two paths in the sampled format at `rows` uniformly spaced
/// sample times (kink points are declared in the header and included in the
/// sample grid).
void save_sampled_coefficients(const std::string& path, const CoefficientPath& b,
                               const CoefficientPath& d, int rows);

}  // namespace hamstab
