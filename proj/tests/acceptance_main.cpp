// Acceptance suite: every release criterion evaluated at its stated
// tolerance, one PASS/FAIL line each. The process exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "hamstab/brake.hpp"
#include "hamstab/ere.hpp"
#include "hamstab/errors.hpp"
#include "hamstab/hill.hpp"
#include "hamstab/oracle.hpp"
#include "hamstab/propagator.hpp"
#include "hamstab/systems.hpp"
#include "hamstab/trace.hpp"

using namespace hamstab;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

char buf[512];

// 1. The no-eigenvalue system: hill ratio exp(-1) to 1e-9, trace 1 to 1e-8,
//    in under a second.
void criterion_1() {
  Timer timer;
  const BoundaryProblem p = make_counterexample33();
  const double f1 = hill_ratio(p.b, p.d, p.boundary, 1.0, 1e-12);
  const TraceReport rep = lagrangian_trace_report(p.b, p.d, p.boundary, 1e-12);
  const double hill_err = std::abs(f1 - std::exp(-1.0));
  const double trace_err = std::abs(rep.tr1 - 1.0);
  const double secs = timer.seconds();
  std::snprintf(buf, sizeof(buf),
                "hill ratio err %.2e (<=1e-9), trace err %.2e (<=1e-8), %.2f s (<1)",
                hill_err, trace_err, secs);
  report(1, hill_err <= 1e-9 && trace_err <= 1e-8 && secs < 1.0, buf);
}

// 2. Spectral-truncation determinant vs the hill ratio on the builtins,
//    with monotone error over N in {32, 64, 128, 256}, under 30 s total.
void criterion_2() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (const BoundaryProblem& p :
       {make_counterexample33(), make_dirichlet_free(), make_constant_nu(0.3)}) {
    const double hill = hill_ratio(p.b, p.d, p.boundary, 1.0, 1e-12);
    double prev = std::numeric_limits<double>::infinity();
    double final_err = 0.0;
    bool monotone = true;
    for (int n : {32, 64, 128, 256}) {
      const double err = std::abs(galerkin_determinant(p.b, p.d, p.boundary, n) - hill);
      if (err >= prev) monotone = false;
      prev = err;
      final_err = err;
    }
    ok = ok && monotone && final_err <= 5e-4;
    std::snprintf(buf, sizeof(buf), "%s N=256 err %.2e%s ", p.name.c_str(), final_err,
                  monotone ? "" : " NOT-MONOTONE");
    detail += buf;
  }
  const double secs = timer.seconds();
  std::snprintf(buf, sizeof(buf), "(%.1f s, <30)", secs);
  report(2, ok && secs < 30.0, detail + buf);
}

// 3. Trace formula vs the shooting eigen-sum on the free problem.
void criterion_3() {
  Timer timer;
  const BoundaryProblem p = make_dirichlet_free();
  const TraceReport rep = lagrangian_trace_report(p.b, p.d, p.boundary, 1e-12);
  const EigenvalueList eigs = shoot_eigenvalues(p.b, p.d, p.boundary, -40.0, 40.0, 1e-11);
  const EigenSumResult sum = eigen_sum(eigs, 2, 1e-7);
  const double formula_err = std::abs(rep.tr2 - 1.0);
  const double cross_err = std::abs(rep.tr2 - sum.value);
  const double secs = timer.seconds();
  std::snprintf(buf, sizeof(buf),
                "tr2 err %.2e (<=1e-6), |tr2 - eigensum| %.2e (<=1e-6), tail bound %.1e, "
                "%.1f s (<10)",
                formula_err, cross_err, sum.tail_bound, secs);
  report(3, formula_err <= 1e-6 && cross_err <= 1e-6 && secs < 10.0, buf);
}

// 4. Equilateral curve endpoints and the full scan.
void criterion_4() {
  Timer timer;
  const PlusMinus f0 = curve_value({EREFamily::lagrange, 0.0, 0.0}, CurveKind::f);
  const double lo = eccentricity_bound(f0.minus);
  const double hi = eccentricity_bound(f0.plus);
  const bool endpoints = std::abs(lo - 0.3483) <= 1e-3 && std::abs(hi - 0.5858) <= 1e-3;

  const RegionScan scan = region_scan(EREFamily::lagrange, 181);
  const double secs = timer.seconds();
  const bool dominates = scan.rows.front().curve > 1.0 / 3.0;
  bool rows_ok = scan.rows.size() >= 181;
  for (const auto& row : scan.rows) {
    if (row.tag == "degenerate_base") continue;
    if (!(row.curve > 0.0 && row.curve <= 1.0)) rows_ok = false;
  }
  std::snprintf(buf, sizeof(buf),
                "bounds at 0: %.4f / %.4f (0.3483 / 0.5858 +-1e-3), curve(0) %.4f > 1/3 %s, "
                "%zu rows, %.1f s (<600)",
                lo, hi, scan.rows.front().curve, dominates ? "yes" : "NO",
                scan.rows.size(), secs);
  report(4, endpoints && dominates && rows_ok && secs < 600.0, buf);
}

// 5. Collinear g1 endpoints at delta = 0 (set-wise, the sign assignment is
//    part of the output).
void criterion_5() {
  const PlusMinus g1 = curve_value({EREFamily::euler, 0.0, 0.0}, CurveKind::g1);
  const double lo = std::min(eccentricity_bound(g1.plus), eccentricity_bound(g1.minus));
  const double hi = std::max(eccentricity_bound(g1.plus), eccentricity_bound(g1.minus));
  std::snprintf(buf, sizeof(buf), "bounds at 0: %.4f / %.4f (0.3483 / 0.5858 +-1e-3)", lo,
                hi);
  report(5, std::abs(lo - 0.3483) <= 1e-3 && std::abs(hi - 0.5858) <= 1e-3, buf);
}

// 6. Index anchors and the -1-degeneracy bracket.
void criterion_6() {
  Timer timer;
  bool ok = true;
  std::string detail;

  const double betas[10] = {0.3, 0.75, 1.0, 2.0, 3.0, 4.0, 5.0, 6.5, 8.0, 9.0};
  const double es[10] = {0.05, 0.1, 0.15, 0.19, 0.02, 0.12, 0.08, 0.17, 0.11, 0.19};
  int plus_ok = 0;
  for (int i = 0; i < 10; ++i) {
    const CoefficientPath b = meyer_schmidt_system({EREFamily::lagrange, betas[i], es[i]});
    if (maslov_index_plus_one(b, 160) == 0) ++plus_ok;
  }
  ok = ok && plus_ok == 10;
  detail += "i1=0 at " + std::to_string(plus_ok) + "/10 points; ";

  int minus_ok = 0;
  for (double beta : {0.0, 0.3, 0.6}) {
    const CoefficientPath b = meyer_schmidt_system({EREFamily::lagrange, beta, 0.0});
    if (maslov_index_minus_one(b, 160) == 2) ++minus_ok;
  }
  for (double beta : {1.0, 5.0, 9.0}) {
    const CoefficientPath b = meyer_schmidt_system({EREFamily::lagrange, beta, 0.0});
    if (maslov_index_minus_one(b, 160) == 0) ++minus_ok;
  }
  ok = ok && minus_ok == 6;
  detail += "i-1 anchors " + std::to_string(minus_ok) + "/6; ";

  double gap = 1.0;
  const double beta_star = polish_minus_one_degeneracy(EREFamily::lagrange, 0.5, 1.0, &gap);
  const bool bracket = std::abs(beta_star - 0.75) <= 1e-6 && gap < 1e-6;
  ok = ok && bracket;

  const double secs = timer.seconds();
  std::snprintf(buf, sizeof(buf), "-1 degeneracy at beta %.8f (|.-0.75|<=1e-6, gap %.1e), "
                "%.0f s (<120)", beta_star, gap, secs);
  report(6, ok && secs < 120.0, detail + buf);
}

// 7. Collinear closed-form anchors.
void criterion_7() {
  const EulerAnchors a1 = degeneracy_anchors(1);
  const bool phi_exact = a1.phi == 0.0;
  double gap = 1.0;
  const double delta_star =
      polish_minus_one_degeneracy(EREFamily::euler, 0.8, 1.2, &gap);
  const bool psi_ok = gap < 1e-6 && std::abs(delta_star - a1.psi) <= 1e-6;
  std::snprintf(buf, sizeof(buf),
                "phi_1(0) = %g (exact 0), psi_1(0) = %.6f, degeneracy polished to %.6f "
                "with gap %.1e (<1e-6)",
                a1.phi, a1.psi, delta_star, gap);
  report(7, phi_exact && psi_ok, buf);
}

// 8. Commit-level property suites.
void criterion_8() {
  Timer timer;
  bool ok = true;
  std::string detail;

  // Symplecticity and unit determinant of propagations across the builtins.
  {
    bool sym_ok = true;
    for (const BoundaryProblem& p :
         {make_counterexample33(), make_dirichlet_free(), make_constant_nu(0.3),
          make_ere_problem({EREFamily::lagrange, 1.0, 0.2}, true),
          make_ere_problem({EREFamily::euler, 0.5, 0.1}, true)}) {
      const SymplecticPath g = fundamental_solution(p.b.plus(p.d, 1.0), 1e-10);
      for (std::size_t i = 0; i < g.grid_size(); i += 7) {
        if (!is_symplectic(g.value(i), 10.0 * std::max(g.accuracy(), 1e-10))) sym_ok = false;
        if (std::abs(lu_det(g.value(i)).value - 1.0) > 1e-8) sym_ok = false;
      }
    }
    ok = ok && sym_ok;
    detail += std::string("symplectic/det ") + (sym_ok ? "ok; " : "FAIL; ");
  }

  // Frame invariance of the hill ratio under 50 random frame changes.
  {
    const BoundaryProblem p = make_dirichlet_free();
    const double reference = hill_ratio(p.b, p.d, p.boundary, 1.0, 1e-12);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(0.1, 2.0);
    bool frames_ok = true;
    for (int i = 0; i < 50; ++i) {
      const double a = dist(rng) * (i % 2 ? -1.0 : 1.0);
      const double c = dist(rng);
      const BoundaryPair scaled{LagrangianFrame(Mat(p.boundary.v0.columns() * a)),
                                LagrangianFrame(Mat(p.boundary.v1.columns() * c)),
                                p.boundary.theta, p.boundary.basis_change};
      if (std::abs(hill_ratio(p.b, p.d, scaled, 1.0, 1e-12) - reference) > 1e-9) {
        frames_ok = false;
      }
    }
    ok = ok && frames_ok;
    detail += std::string("frame invariance ") + (frames_ok ? "ok; " : "FAIL; ");
  }

  // Parity on 20 random small systems with definite perturbations.
  {
    std::mt19937_64 rng(2025);
    std::normal_distribution<double> dist;
    std::uniform_real_distribution<double> ang(-1.2, 1.4);
    int checked = 0, agreed = 0;
    for (int rep = 0; rep < 60 && checked < 20; ++rep) {
      Mat b0(2, 2), b1(2, 2);
      b0 << dist(rng), dist(rng), 0, dist(rng);
      b0(1, 0) = b0(0, 1);
      b1 << dist(rng), dist(rng), 0, dist(rng);
      b1(1, 0) = b1(0, 1);
      const CoefficientPath b(1, 1.0, [b0, b1](double t) -> Mat {
        return b0 + std::sin(2.0 * t) * b1;
      });
      const double scale = 1.0 + 4.0 * std::abs(dist(rng));
      const CoefficientPath d = CoefficientPath::constant(scale * Mat::Identity(2, 2), 1.0);
      Vec th(1);
      th << ang(rng);
      const BoundaryPair boundary = boundary_from_angles(th);
      try {
        const int index = relative_morse_index(b, d, boundary, 200);
        const int sign = determinant_sign(b, d, boundary);
        ++checked;
        if (sign == (index % 2 == 0 ? 1 : -1)) ++agreed;
      } catch (const NumericalError&) {
        // degenerate endpoint draw; skip
      }
    }
    ok = ok && checked == 20 && agreed == 20;
    detail += "parity " + std::to_string(agreed) + "/" + std::to_string(checked) + "; ";
  }

  // Brake decomposition residuals on 10 symmetric systems.
  {
    bool brake_ok = true;
    int count = 0;
    for (double beta : {0.2, 1.0, 3.0, 6.0, 8.5}) {
      for (double e : {0.1, 0.3}) {
        const CoefficientPath b0 = meyer_schmidt_system({EREFamily::lagrange, beta, 0.0});
        const CoefficientPath d =
            meyer_schmidt_system({EREFamily::lagrange, beta, e}).plus(b0, -1.0);
        const DecompositionReport rep =
            decomposition_check(b0, d, ere_brake_symmetry(Mat::Identity(4, 4)));
        ++count;
        if (rep.product_residual > 1e-7 || rep.block_residual[0] > 1e-7 ||
            rep.block_residual[1] > 1e-7) {
          brake_ok = false;
        }
      }
    }
    ok = ok && brake_ok && count == 10;
    detail += std::string("brake residuals ") + (brake_ok ? "ok; " : "FAIL; ");
  }

  // Conditional-trace consistency on constant-coefficient systems: closed
  // form vs -Tr(G1) vs the central difference of the hill ratio.
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> dist;
    bool trace_ok = true;
    for (int rep = 0; rep < 5; ++rep) {
      Mat d(2, 2);
      d << dist(rng), dist(rng), 0, dist(rng);
      d(1, 0) = d(0, 1);
      const double nu = 0.2 + 0.1 * rep;
      const BoundaryProblem base = make_constant_nu(nu);
      const CoefficientPath dpath = CoefficientPath::constant(d, 1.0);
      const double closed = constant_coefficient_trace(nu, dpath, base.boundary);
      const TraceReport tr = lagrangian_trace_report(base.b, dpath, base.boundary, 1e-12);
      const double h = 1e-4;
      const double fd = (hill_ratio(base.b, dpath, base.boundary, h, 1e-12) -
                         hill_ratio(base.b, dpath, base.boundary, -h, 1e-12)) /
                        (2.0 * h);
      if (std::abs(closed - tr.tr1) > 1e-8 || std::abs(tr.tr1 + fd) > 1e-6) trace_ok = false;
    }
    ok = ok && trace_ok;
    detail += std::string("trace consistency ") + (trace_ok ? "ok" : "FAIL");
  }

  const double secs = timer.seconds();
  std::snprintf(buf, sizeof(buf), " (%.1f s, <60)", secs);
  report(8, ok && secs < 60.0, detail + buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
