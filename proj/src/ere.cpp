#include "hamstab/ere.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "hamstab/errors.hpp"
#include "hamstab/hill.hpp"
#include "hamstab/parallel.hpp"
#include "hamstab/propagator.hpp"
#include "hamstab/trace.hpp"

namespace hamstab {

namespace {

Mat j2() {
  Mat j(2, 2);
  j << 0, -1, 1, 0;
  return j;
}

void validate(const EREConfig& cfg) {
  if (cfg.e < 0.0 || cfg.e >= 1.0) {
    throw InvalidEccentricity("eccentricity must lie in [0, 1), got " + std::to_string(cfg.e));
  }
  if (cfg.family == EREFamily::lagrange && (cfg.param < 0.0 || cfg.param > 9.0)) {
    throw ConfigError("beta must lie in [0, 9]");
  }
  if (cfg.family == EREFamily::euler && cfg.param < 0.0) {
    throw ConfigError("delta must be >= 0");
  }
}

double cos_plus(double t) { return std::max(std::cos(t), 0.0); }
double cos_minus(double t) { return std::min(std::cos(t), 0.0); }

/// diag(0, 0, k3, k4) profile of the eccentricity perturbation.
std::pair<double, double> k_profile(const EREConfig& cfg) {
  if (cfg.family == EREFamily::lagrange) {
    const double root = std::sqrt(9.0 - cfg.param);
    return {(3.0 + root) / 2.0, (3.0 - root) / 2.0};
  }
  return {-cfg.param, 2.0 * cfg.param + 3.0};
}

}  // namespace

Mat ere_hessian(const EREConfig& cfg) {
  validate(cfg);
  Mat r(2, 2);
  if (cfg.family == EREFamily::lagrange) {
    const double eta = std::sqrt(9.0 - cfg.param) / 2.0;
    r << 1.5 + eta, 0, 0, 1.5 - eta;
  } else {
    r << -cfg.param, 0, 0, 2.0 * cfg.param + 3.0;
  }
  return r;
}

CoefficientPath meyer_schmidt_system(const EREConfig& cfg) {
  validate(cfg);
  const Mat r = ere_hessian(cfg);
  const double e = cfg.e;
  const Mat jj = j2();
  return CoefficientPath(2, 2.0 * M_PI, [r, e, jj](double t) -> Mat {
    const double re = 1.0 / (1.0 + e * std::cos(t));
    Mat b(4, 4);
    b.topLeftCorner(2, 2) = Mat::Identity(2, 2);
    b.topRightCorner(2, 2) = -jj;
    b.bottomLeftCorner(2, 2) = jj;
    b.bottomRightCorner(2, 2) = Mat::Identity(2, 2) - re * r;
    return b;
  });
}

BrakeSymmetryData ere_brake_symmetry(const Mat& s_matrix) {
  Mat n = Mat::Zero(4, 4);
  n(0, 0) = 1;
  n(1, 1) = -1;
  n(2, 2) = -1;
  n(3, 3) = 1;
  return BrakeSymmetryData::from(n, s_matrix);
}

std::pair<CoefficientPath, CoefficientPath> split_perturbation(const EREConfig& cfg) {
  validate(cfg);
  const auto [k3, k4] = k_profile(cfg);

  auto diag_path = [](double a3, double a4, bool positive_part) {
    return [a3, a4, positive_part](double t) -> Mat {
      Mat m = Mat::Zero(4, 4);
      if (positive_part) {
        // Entrywise positive part: each diagonal entry takes the cosine half
        // that keeps it >= 0.
        m(2, 2) = a3 >= 0 ? cos_plus(t) * a3 : cos_minus(t) * a3;
        m(3, 3) = a4 >= 0 ? cos_plus(t) * a4 : cos_minus(t) * a4;
      } else {
        m(2, 2) = a3 >= 0 ? cos_minus(t) * a3 : cos_plus(t) * a3;
        m(3, 3) = a4 >= 0 ? cos_minus(t) * a4 : cos_plus(t) * a4;
      }
      return m;
    };
  };

  const std::vector<double> kink = {M_PI / 2.0};
  CoefficientPath plus(2, M_PI, diag_path(k3, k4, true), kink);
  CoefficientPath minus(2, M_PI, diag_path(k3, k4, false), kink);
  return {plus, minus};
}

BoundaryPair ere_half_boundary(bool plus_space) {
  Mat v_plus = Mat::Zero(4, 2);   // span{e1, e4}
  v_plus(0, 0) = 1;
  v_plus(3, 1) = 1;
  Mat v_minus = Mat::Zero(4, 2);  // span{e2, e3}
  v_minus(1, 0) = 1;
  v_minus(2, 1) = 1;
  if (plus_space) {
    return normalize_boundary_pair(LagrangianFrame(v_minus), LagrangianFrame(v_plus));
  }
  return normalize_boundary_pair(LagrangianFrame(v_plus), LagrangianFrame(v_minus));
}

PlusMinus curve_value(const EREConfig& cfg, CurveKind which, double tol) {
  validate(cfg);
  if ((which == CurveKind::f) != (cfg.family == EREFamily::lagrange)) {
    throw ConfigError("curve kind f belongs to the equilateral family, g1/g2 to the collinear");
  }

  EREConfig base = cfg;
  base.e = 0.0;
  const CoefficientPath b_half = meyer_schmidt_system(base).restricted(M_PI);
  const auto [k_plus, k_minus] = split_perturbation(base);
  const CoefficientPath& d = (which == CurveKind::g1) ? k_plus : k_minus;

  const SymplecticPath gamma0 = fundamental_solution(b_half, tol);
  const IteratedIntegrals ints = iterated_integrals(gamma0, d, 2, tol);

  PlusMinus out{};
  for (bool plus_space : {true, false}) {
    const BoundaryPair boundary = ere_half_boundary(plus_space);
    HillData hill;
    try {
      hill = transversality(boundary, gamma0);
    } catch (const DegenerateBaseProblem& err) {
      throw DegenerateBaseProblem(std::string("curve_value: base problem degenerate on E") +
                                  (plus_space ? "+" : "-") + ": " + err.what());
    }
    auto [g1m, g2m] = g_matrices(hill, ints);
    const TraceReport rep = trace_powers(g1m, g2m);
    (plus_space ? out.plus : out.minus) = rep.tr2;
  }
  return out;
}

double eccentricity_bound(double tr2) { return 1.0 / (1.0 + std::sqrt(std::max(tr2, 0.0))); }

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::certified_stable: return "certified_stable";
    case Classification::certified_EH: return "certified_EH";
    default: return "uncertified";
  }
}

EulerAnchors degeneracy_anchors(int j) {
  if (j < 1) throw ConfigError("degeneracy_anchors: j must be >= 1");
  // The elliptic frequency of the collinear block solves
  // omega^2 = ((1 - delta) + sqrt(9 delta^2 + 10 delta + 1))/2; inverting
  // omega = j (+1-degeneracy) resp. omega = j + 1/2 (-1-degeneracy) gives
  // delta = (omega^2 - 3 + sqrt(9 omega^4 - 14 omega^2 + 9))/4.
  auto closed_form = [](double omega) {
    const double w2 = omega * omega;
    return (w2 - 3.0 + std::sqrt(9.0 * w2 * w2 - 14.0 * w2 + 9.0)) / 4.0;
  };
  return {closed_form(j), closed_form(j + 0.5)};
}

Classification classify(const EREConfig& cfg) {
  validate(cfg);
  if (cfg.family == EREFamily::lagrange) {
    if (cfg.param >= 0.75) return Classification::uncertified;
    const PlusMinus f = curve_value(cfg, CurveKind::f);
    const double bound = std::min(eccentricity_bound(f.plus), eccentricity_bound(f.minus));
    return cfg.e < bound ? Classification::certified_stable : Classification::uncertified;
  }

  // Collinear: locate the band between consecutive psi anchors.
  int band = 0;
  double psi_prev = 0.0;
  for (int j = 1; j <= 64; ++j) {
    const double psi_j = degeneracy_anchors(j).psi;
    if (std::abs(cfg.param - psi_j) < 1e-9) return Classification::uncertified;
    if (cfg.param < psi_j) break;
    band = j;
    psi_prev = psi_j;
  }
  (void)psi_prev;

  const PlusMinus g1 = curve_value(cfg, CurveKind::g1);
  double bound = std::min(eccentricity_bound(g1.plus), eccentricity_bound(g1.minus));
  if (band >= 1) {
    const PlusMinus g2 = curve_value(cfg, CurveKind::g2);
    bound = std::min(bound,
                     std::min(eccentricity_bound(g2.plus), eccentricity_bound(g2.minus)));
  }
  return cfg.e < bound ? Classification::certified_EH : Classification::uncertified;
}

double minus_one_degeneracy_gap(EREFamily family, double param, double tol) {
  EREConfig cfg{family, param, 0.0};
  const SymplecticPath gamma = fundamental_solution(meyer_schmidt_system(cfg), tol);
  const Mat m = gamma.monodromy() + Mat::Identity(4, 4);
  return extreme_singular_values(m).first;
}

double polish_minus_one_degeneracy(EREFamily family, double lo, double hi, double* gap_out) {
  // Golden-section on the gap; it is V-shaped through a -1-degeneracy.
  const double gold = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gold * (b - a), x2 = a + gold * (b - a);
  double f1 = minus_one_degeneracy_gap(family, x1);
  double f2 = minus_one_degeneracy_gap(family, x2);
  for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gold * (b - a);
      f1 = minus_one_degeneracy_gap(family, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gold * (b - a);
      f2 = minus_one_degeneracy_gap(family, x2);
    }
  }
  const double best = f1 < f2 ? x1 : x2;
  if (gap_out) *gap_out = std::min(f1, f2);
  return best;
}

namespace {

RegionScanRow scan_row_at(EREFamily family, double param, double tol) {
  RegionScanRow row{};
  row.param = param;
  row.curve_g2_minus = std::numeric_limits<double>::quiet_NaN();
  row.curve_g2_plus = std::numeric_limits<double>::quiet_NaN();

  EREConfig cfg{family, param, 0.0};
  if (family == EREFamily::lagrange) {
    const PlusMinus f = curve_value(cfg, CurveKind::f, tol);
    row.curve_minus = eccentricity_bound(f.minus);
    row.curve_plus = eccentricity_bound(f.plus);
    row.curve = std::min(row.curve_minus, row.curve_plus);
    row.tag = param < 0.75 ? "certified_stable_below" : "index_changed";
    return row;
  }

  const PlusMinus g1 = curve_value(cfg, CurveKind::g1, tol);
  row.curve_minus = eccentricity_bound(g1.minus);
  row.curve_plus = eccentricity_bound(g1.plus);
  row.curve = std::min(row.curve_minus, row.curve_plus);

  int band = 0;
  for (int j = 1; j <= 64; ++j) {
    const double psi_j = degeneracy_anchors(j).psi;
    if (std::abs(param - psi_j) < 1e-9) {
      row.tag = "degenerate_anchor";
      row.curve = 0.0;
      return row;
    }
    if (param < psi_j) break;
    band = j;
  }
  if (band >= 1) {
    const PlusMinus g2 = curve_value(cfg, CurveKind::g2, tol);
    row.curve_g2_minus = eccentricity_bound(g2.minus);
    row.curve_g2_plus = eccentricity_bound(g2.plus);
    row.curve = std::min({row.curve, row.curve_g2_minus, row.curve_g2_plus});
  }
  row.tag = "certified_EH_below";
  return row;
}

/// Grid points can land exactly on a base-problem degeneracy (the curve
/// pinches to zero there, e.g. the equilateral parameter 3/4). Nudge the
/// parameter off the puncture and report where the row was really taken.
RegionScanRow scan_row(EREFamily family, double param, double tol) {
  double nudge = 0.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      RegionScanRow row = scan_row_at(family, param + nudge, tol);
      if (nudge != 0.0) row.tag += "_nudged";
      return row;
    } catch (const DegenerateBaseProblem&) {
      nudge = nudge == 0.0 ? 1e-6 : nudge * 100.0;
    }
  }
  RegionScanRow row{};
  row.param = param;
  row.curve_minus = row.curve_plus = row.curve = 0.0;
  row.curve_g2_minus = row.curve_g2_plus = std::numeric_limits<double>::quiet_NaN();
  row.tag = "degenerate_base";
  return row;
}

}  // namespace

RegionScan region_scan(EREFamily family, int grid_points, double tol) {
  if (grid_points < 2) throw ConfigError("region_scan: need at least 2 grid points");
  const double hi = family == EREFamily::lagrange ? 9.0 : 7.0;

  std::set<double> params;
  for (int i = 0; i < grid_points; ++i) params.insert(hi * i / (grid_points - 1.0));

  std::map<double, RegionScanRow> rows;
  for (int round = 0; round < 4; ++round) {
    std::vector<double> todo;
    for (double p : params) {
      if (!rows.count(p)) todo.push_back(p);
    }
    std::vector<RegionScanRow> fresh(todo.size());
    parallel_for(todo.size(),
                 [&](std::size_t i) { fresh[i] = scan_row(family, todo[i], tol); });
    for (std::size_t i = 0; i < todo.size(); ++i) rows[todo[i]] = fresh[i];

    // Refine where the curve's discrete second difference is large.
    std::vector<std::pair<double, RegionScanRow>> ordered(rows.begin(), rows.end());
    std::set<double> inserts;
    for (std::size_t i = 1; i + 1 < ordered.size(); ++i) {
      const double d2 = ordered[i + 1].second.curve - 2.0 * ordered[i].second.curve +
                        ordered[i - 1].second.curve;
      if (std::abs(d2) > 1e-2) {
        inserts.insert(0.5 * (ordered[i - 1].first + ordered[i].first));
        inserts.insert(0.5 * (ordered[i].first + ordered[i + 1].first));
      }
    }
    if (inserts.empty()) break;
    params.insert(inserts.begin(), inserts.end());
  }

  RegionScan scan;
  scan.family = family;
  for (auto& [p, row] : rows) scan.rows.push_back(row);
  return scan;
}

int unit_circle_eigen_count(const Mat& monodromy, double tol) {
  Eigen::EigenSolver<Mat> es(monodromy);
  int count = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) < tol) ++count;
  }
  return count;
}

}  // namespace hamstab
