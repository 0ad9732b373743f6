#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hamstab/errors.hpp"
#include "hamstab/hill.hpp"
#include "hamstab/systems.hpp"

using namespace hamstab;

namespace {

Mat col2(double a, double b) {
  Mat m(2, 1);
  m << a, b;
  return m;
}

}  // namespace

TEST_CASE("transversality data for the free problem") {
  const BoundaryProblem p = make_dirichlet_free();
  const SymplecticPath g0 = fundamental_solution(p.b, 1e-11);
  const HillData hill = transversality(p.boundary, g0);

  CHECK(max_abs(hill.p - Mat::Identity(2, 2)) < 1e-12);
  CHECK(hill.transversality == doctest::Approx(1.0));
  // Q is idempotent with I - Q = P Qd P^{-1}.
  CHECK(max_abs(hill.q * hill.q - hill.q) < 1e-9);
  Eigen::PartialPivLU<Mat> lu(hill.p);
  CHECK(max_abs((Mat::Identity(2, 2) - hill.q) - hill.p * hill.qd * lu.inverse()) < 1e-9);
}

TEST_CASE("coincident boundary subspaces are degenerate for the free problem") {
  const LagrangianFrame h(col2(1, 0));
  const BoundaryPair pair = normalize_boundary_pair(h, h);
  const SymplecticPath g0 = fundamental_solution(CoefficientPath::zero(1, 1.0), 1e-11);
  CHECK_THROWS_AS(transversality(pair, g0), DegenerateBaseProblem);
}

TEST_CASE("hill ratio at alpha = 0 is one") {
  const BoundaryProblem p = make_counterexample33();
  CHECK(hill_ratio(p.b, p.d, p.boundary, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("the no-eigenvalue system has ratio exp(-1)") {
  const BoundaryProblem p = make_counterexample33();
  const double f1 = hill_ratio(p.b, p.d, p.boundary, 1.0, 1e-12);
  CHECK(std::abs(f1 - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("free problem with identity perturbation gives cos(alpha)") {
  const BoundaryProblem p = make_dirichlet_free();
  for (double alpha : {0.5, 1.0, 2.0, -1.3}) {
    CHECK(hill_ratio(p.b, p.d, p.boundary, alpha, 1e-12) ==
          doctest::Approx(std::cos(alpha)).epsilon(1e-10));
  }
}

TEST_CASE("determinant signs") {
  const BoundaryProblem p = make_dirichlet_free();
  CHECK(determinant_sign(p.b, CoefficientPath::zero(1, 1.0), p.boundary) == 1);

  const BoundaryProblem c = make_counterexample33();
  CHECK(determinant_sign(c.b, c.d, c.boundary) == 1);  // exp(-1) > 0

  // D = pi I: gamma_1(1) = exp(pi J) = -I, so f(1) = det(-Z0, Z1) = -1.
  CHECK(determinant_sign(p.b, p.d.scaled(M_PI), p.boundary) == -1);
  // D = 2 pi I: gamma_1(1) = exp(2 pi J) = I, f(1) = +1 (two crossings).
  CHECK(determinant_sign(p.b, p.d.scaled(2.0 * M_PI), p.boundary) == 1);
}

TEST_CASE("degenerate endpoints are reported") {
  const BoundaryProblem p = make_dirichlet_free();
  // D = (pi/2) I ends exactly on an eigenvalue: gamma_1(1) Z0 = (0,1) = Z1.
  CHECK_THROWS_AS(determinant_sign(p.b, p.d.scaled(M_PI / 2), p.boundary),
                  DegenerateEndpoint);
}

TEST_CASE("hill ratio is frame invariant") {
  const BoundaryProblem p = make_counterexample33();
  const double reference = hill_ratio(p.b, p.d, p.boundary, 1.0, 1e-12);

  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  int done = 0;
  while (done < 50) {
    const double a = dist(rng);
    const double b = dist(rng);
    if (std::abs(a) < 1e-2 || std::abs(b) < 1e-2) continue;
    const BoundaryPair scaled{LagrangianFrame(Mat(p.boundary.v0.columns() * a)),
                              LagrangianFrame(Mat(p.boundary.v1.columns() * b)),
                              p.boundary.theta, p.boundary.basis_change};
    const double f = hill_ratio(p.b, p.d, scaled, 1.0, 1e-12);
    CHECK(f == doctest::Approx(reference).epsilon(1e-9));
    ++done;
  }
}

TEST_CASE("multiplicativity along the perturbation path") {
  // f(alpha) computed from the base B equals f(alpha0) times the ratio
  // recomputed from the shifted base B + alpha0 D.
  const BoundaryProblem p = make_dirichlet_free();
  const double alpha0 = 0.4, alpha = 1.1;
  const double direct = hill_ratio(p.b, p.d, p.boundary, alpha, 1e-12);
  const double first = hill_ratio(p.b, p.d, p.boundary, alpha0, 1e-12);
  const double second =
      hill_ratio(p.b.plus(p.d, alpha0), p.d, p.boundary, alpha - alpha0, 1e-12);
  CHECK(direct == doctest::Approx(first * second).epsilon(1e-8));
}
