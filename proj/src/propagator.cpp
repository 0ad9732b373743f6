#include "hamstab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "hamstab/errors.hpp"

namespace hamstab {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB[7] = {35.0 / 384,     0.0,       500.0 / 1113, 125.0 / 192,
                          -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kE[7] = {71.0 / 57600,       0.0,          -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200,  22.0 / 525,   -1.0 / 40};

struct StepRecord {
  double t;
  Mat y;
  Mat f;
};

/// Adaptive DP5 over [0, span] for Y' = rhs(t, Y), Y any rectangular matrix.
/// Steps never straddle the breakpoints. `on_accept` sees every accepted
/// grid point including the initial one. Returns the tolerance actually
/// achieved: when the embedded error estimate bottoms out at its roundoff
/// floor, the working tolerance is raised to that floor (the request was
/// unattainable) and the raised value is reported.
double integrate(const std::function<Mat(double, const Mat&)>& rhs, const Mat& y0, double span,
                 double tol, const std::vector<double>& breakpoints,
                 const std::function<void(const StepRecord&)>& on_accept) {
  std::vector<double> stops = {0.0};
  for (double b : breakpoints) {
    if (b > 1e-14 * span && b < span * (1.0 - 1e-14)) stops.push_back(b);
  }
  stops.push_back(span);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(),
                          [&](double a, double b) { return b - a < 1e-14 * span; }),
              stops.end());

  Mat y = y0;
  Mat f = rhs(0.0, y);
  on_accept({0.0, y, f});

  const double hmin_floor = 64.0 * std::numeric_limits<double>::epsilon() * span;
  double working_tol = tol;
  Mat k[7];

  for (std::size_t seg = 0; seg + 1 < stops.size(); ++seg) {
    double t = stops[seg];
    const double tend = stops[seg + 1];
    double h = std::min((tend - t) / 4.0, span / 50.0);
    f = rhs(t, y);
    long rejected_in_a_row = 0;
    double last_reject_h = 0.0, last_reject_err = 0.0;

    while (t < tend - 1e-14 * span) {
      h = std::min(h, tend - t);
      if (h < hmin_floor && tend - t > 4.0 * hmin_floor) {
        throw StiffnessError("step size underflow at t = " + std::to_string(t));
      }

      k[0] = f;
      for (int s = 1; s < 7; ++s) {
        Mat ys = y;
        for (int q = 0; q < s; ++q) {
          if (kA[s][q] != 0.0) ys += (h * kA[s][q]) * k[q];
        }
        k[s] = rhs(t + kC[s] * h, ys);
      }
      Mat ynew = y;
      for (int s = 0; s < 7; ++s) {
        if (kB[s] != 0.0) ynew += (h * kB[s]) * k[s];
      }
      Mat err_mat = Mat::Zero(y.rows(), y.cols());
      for (int s = 0; s < 7; ++s) {
        if (kE[s] != 0.0) err_mat += (h * kE[s]) * k[s];
      }
      const double scale = 1.0 + std::max(max_abs(y), max_abs(ynew));
      const double err = max_abs(err_mat) / scale;
      const double tol_step = working_tol * (h / span);

      bool accept = err <= tol_step || h <= 2.0 * hmin_floor;
      bool noise_dominated = false;
      if (!accept && last_reject_h > 0.0 && h < 0.95 * last_reject_h) {
        // A truncation-dominated estimate shrinks like h^5 under rejection.
        // When it refuses to, the estimate has hit its roundoff floor and the
        // requested tolerance is unattainable: accept, and raise the working
        // tolerance to the measured floor so stepping resumes there.
        const double expected = last_reject_err * std::pow(h / last_reject_h, 5.0);
        if (err > 3.0 * expected) {
          accept = true;
          noise_dominated = true;
        }
      }
      if (!accept && rejected_in_a_row >= 8 && err <= 100.0 * tol_step) {
        accept = true;
        noise_dominated = true;
      }

      if (accept) {
        t += h;
        y = std::move(ynew);
        f = k[6];  // stage 7 is f(t + h, y_new)
        on_accept({t, y, f});
        rejected_in_a_row = 0;
        last_reject_h = 0.0;
        if (noise_dominated) {
          working_tol = std::min(std::max(working_tol, 4.0 * err * span / h), 1e6 * tol);
          h *= 4.0;
        } else {
          const double grow = err > 0.0 ? 0.9 * std::pow(tol_step / err, 0.2) : 5.0;
          h *= std::clamp(grow, 0.2, 5.0);
        }
      } else {
        ++rejected_in_a_row;
        if (rejected_in_a_row > 60) {
          throw StiffnessError("persistent step rejection at t = " + std::to_string(t));
        }
        last_reject_h = h;
        last_reject_err = err;
        h *= std::clamp(0.9 * std::pow(tol_step / err, 0.2), 0.1, 0.7);
      }
    }
  }
  return working_tol;
}

}  // namespace

SymplecticPath::SymplecticPath(CoefficientPath generator, std::vector<double> times,
                               std::vector<Mat> values, std::vector<Mat> derivs, double accuracy,
                               double defect)
    : generator_(std::move(generator)),
      times_(std::move(times)),
      values_(std::move(values)),
      derivs_(std::move(derivs)),
      accuracy_(accuracy),
      defect_(defect) {}

std::ptrdiff_t SymplecticPath::grid_index(double t, double tol) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
  if (it != times_.end() && std::abs(*it - t) <= tol) return it - times_.begin();
  return -1;
}

Mat SymplecticPath::dense_eval(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double h = times_[i + 1] - times_[i];
  if (h <= 0.0) return values_[i];
  const double s = (t - times_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * values_[i] + (h10 * h) * derivs_[i] + h01 * values_[i + 1] +
         (h11 * h) * derivs_[i + 1];
}

SymplecticPath fundamental_solution(const CoefficientPath& coeffs, double tol,
                                    const std::vector<double>& forced_times) {
  if (tol <= 0.0) throw AccuracyError("fundamental_solution: tol must be positive");
  const int dim = coeffs.dim();
  const Mat j = symplectic_form(coeffs.n());

  auto rhs = [&](double t, const Mat& y) -> Mat { return j * coeffs(t) * y; };

  std::vector<double> breaks = coeffs.kink_points();
  breaks.insert(breaks.end(), forced_times.begin(), forced_times.end());

  std::vector<double> times;
  std::vector<Mat> values, derivs;
  double defect = 0.0;
  const double achieved =
      integrate(rhs, Mat::Identity(dim, dim), coeffs.length(), tol, breaks,
                [&](const StepRecord& rec) {
                  times.push_back(rec.t);
                  values.push_back(rec.y);
                  derivs.push_back(rec.f);
                  const double rel =
                      symplectic_defect(rec.y) / std::max(1.0, rec.y.squaredNorm());
                  defect = std::max(defect, rel);
                });

  if (defect > 100.0 * std::max(tol, achieved)) {
    throw AccuracyError("symplectic defect " + std::to_string(defect) +
                        " exceeds 100 x tol; integration not trustworthy");
  }
  return SymplecticPath(coeffs, std::move(times), std::move(values), std::move(derivs),
                        std::max(achieved, defect), defect);
}

IteratedIntegrals iterated_integrals(const SymplecticPath& gamma0, const CoefficientPath& d,
                                     int order, double tol) {
  if (order < 1) throw DimensionError("iterated_integrals: order must be >= 1");
  const CoefficientPath& b = gamma0.generator();
  if (d.n() != b.n()) throw DimensionError("iterated_integrals: mismatched n");
  if (std::abs(d.length() - gamma0.length()) > 1e-12 * gamma0.length()) {
    throw DimensionError("iterated_integrals: mismatched horizon");
  }
  const int dim = b.dim();
  const Mat j = symplectic_form(b.n());

  // Stacked state (gamma | M_1 | ... | M_order); M_j' = J Dhat M_{j-1}.
  auto rhs = [&](double t, const Mat& y) -> Mat {
    Mat out(dim, y.cols());
    const Mat gamma = y.leftCols(dim);
    out.leftCols(dim) = j * b(t) * gamma;
    const Mat jdhat = j * (gamma.transpose() * d(t) * gamma);
    Mat prev = Mat::Identity(dim, dim);
    for (int q = 1; q <= order; ++q) {
      out.middleCols(q * dim, dim) = jdhat * prev;
      prev = y.middleCols(q * dim, dim);
    }
    return out;
  };

  std::vector<double> breaks = b.kink_points();
  const auto& dk = d.kink_points();
  breaks.insert(breaks.end(), dk.begin(), dk.end());

  Mat y0 = Mat::Zero(dim, dim * (order + 1));
  y0.leftCols(dim) = Mat::Identity(dim, dim);

  Mat yfinal;
  integrate(rhs, y0, gamma0.length(), tol, breaks,
            [&](const StepRecord& rec) { yfinal = rec.y; });

  IteratedIntegrals out;
  out.order = order;
  for (int q = 1; q <= order; ++q) out.matrices.push_back(yfinal.middleCols(q * dim, dim));
  return out;
}

}  // namespace hamstab
