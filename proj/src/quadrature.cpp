#include "hamstab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hamstab {

namespace {

GaussRule compute_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Chebyshev-like initial guess, then Newton on P_order.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[order - 1 - i] = x;
    rule.weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

std::vector<std::pair<double, double>> split_at_kinks(double a, double b,
                                                      const std::vector<double>& kinks) {
  std::vector<double> pts = {a};
  for (double k : kinks) {
    if (k > a + 1e-14 * (std::abs(a) + 1.0) && k < b - 1e-14 * (std::abs(b) + 1.0)) {
      pts.push_back(k);
    }
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> segs;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) segs.emplace_back(pts[i], pts[i + 1]);
  }
  return segs;
}

Mat fixed_panels(const std::function<Mat(double)>& f, double a, double b, int panels,
                 const GaussRule& rule) {
  const double h = (b - a) / panels;
  Mat acc;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Mat v = f(mid + 0.5 * h * rule.nodes[q]);
      if (acc.size() == 0) acc = Mat::Zero(v.rows(), v.cols());
      acc += (0.5 * h * rule.weights[q]) * v;
    }
  }
  return acc;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

Mat adaptive_integrate_matrix(const std::function<Mat(double)>& f, double a, double b,
                              double tol, const std::vector<double>& kinks) {
  const GaussRule& rule = gauss_rule(12);
  Mat total;
  for (auto [lo, hi] : split_at_kinks(a, b, kinks)) {
    Mat coarse = fixed_panels(f, lo, hi, 1, rule);
    int panels = 2;
    for (;;) {
      const Mat fine = fixed_panels(f, lo, hi, panels, rule);
      const double err = max_abs(fine - coarse);
      const double scale = std::max(1.0, max_abs(fine));
      coarse = fine;
      if (err <= tol * scale || panels >= 1 << 14) break;
      panels *= 2;
    }
    if (total.size() == 0) {
      total = coarse;
    } else {
      total += coarse;
    }
  }
  return total;
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol, const std::vector<double>& kinks) {
  auto wrap = [&](double t) { return Mat::Constant(1, 1, f(t)); };
  return adaptive_integrate_matrix(wrap, a, b, tol, kinks)(0, 0);
}

Mat panel_integrate_matrix(const std::function<Mat(double)>& f, double a, double b,
                           int panels, int order) {
  return fixed_panels(f, a, b, panels, gauss_rule(order));
}

}  // namespace hamstab
