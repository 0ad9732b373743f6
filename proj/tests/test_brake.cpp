#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hamstab/brake.hpp"
#include "hamstab/ere.hpp"
#include "hamstab/errors.hpp"
#include "hamstab/oracle.hpp"
#include "hamstab/propagator.hpp"

using namespace hamstab;

namespace {

int intersection_dim(const Mat& a, const Mat& b, double tol = 1e-6) {
  const Mat qa = orthonormal_columns(a);
  const Mat qb = orthonormal_columns(b);
  Eigen::JacobiSVD<Mat> svd(Mat(qa.transpose() * qb));
  int dim = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (std::abs(svd.singularValues()(i) - 1.0) < tol) ++dim;
  }
  return dim;
}

}  // namespace

TEST_CASE("brake symmetry of the essential-part systems") {
  const CoefficientPath be = meyer_schmidt_system({EREFamily::lagrange, 2.0, 0.35});
  const CoefficientPath b0 = meyer_schmidt_system({EREFamily::lagrange, 2.0, 0.0});
  const BrakeSymmetryData sym = ere_brake_symmetry(Mat::Identity(4, 4));
  CHECK(check_brake_symmetry(b0, be.plus(b0, -1.0), sym));
  CHECK(check_brake_symmetry(b0, CoefficientPath::zero(2, 2.0 * M_PI), sym));
}

TEST_CASE("time-asymmetric coefficients fail the symmetry check") {
  Mat n1(2, 2);
  n1 << 1, 0, 0, -1;
  const BrakeSymmetryData sym = BrakeSymmetryData::from(n1, Mat::Identity(2, 2));
  const CoefficientPath ramp(1, 1.0,
                             [](double t) -> Mat { return t * Mat::Identity(2, 2); });
  CHECK_FALSE(check_brake_symmetry(ramp, CoefficientPath::zero(1, 1.0), sym));
}

TEST_CASE("split boundaries for diagonal and rotated symmetries") {
  Mat n1(2, 2);
  n1 << 1, 0, 0, -1;
  Mat e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;

  // S = I: both half problems run eigenvector to itself.
  const SplitBoundaries id_split =
      split_boundaries(BrakeSymmetryData::from(n1, Mat::Identity(2, 2)), 2.0);
  CHECK(id_split.half_period == doctest::Approx(1.0));
  CHECK(subspace_distance(id_split.plus.v0.columns(), e1) < 1e-10);
  CHECK(subspace_distance(id_split.plus.v1.columns(), e1) < 1e-10);
  CHECK(subspace_distance(id_split.minus.v0.columns(), e2) < 1e-10);
  CHECK(subspace_distance(id_split.minus.v1.columns(), e2) < 1e-10);

  // S = R(pi/2): V+(SN) is the diagonal direction R(pi/4) e1.
  Vec quarter(1);
  quarter << M_PI / 2;
  const SplitBoundaries rot_split =
      split_boundaries(BrakeSymmetryData::from(n1, rotation_matrix(quarter)), 2.0);
  Mat diag_dir(2, 1);
  diag_dir << std::cos(M_PI / 4), std::sin(M_PI / 4);
  CHECK(subspace_distance(rot_split.plus.v0.columns(), diag_dir) < 1e-10);
  CHECK(subspace_distance(rot_split.plus.v1.columns(), e1) < 1e-10);
}

TEST_CASE("decomposition identities for the zero perturbation") {
  const CoefficientPath b0 = meyer_schmidt_system({EREFamily::lagrange, 1.0, 0.0});
  const BrakeSymmetryData sym = ere_brake_symmetry(Mat::Identity(4, 4));
  const DecompositionReport rep =
      decomposition_check(b0, CoefficientPath::zero(2, 2.0 * M_PI), sym);
  CHECK(rep.periodic_ratio == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.half_ratio_plus == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.half_ratio_minus == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.product_residual < 1e-10);
}

TEST_CASE("decomposition identities for an eccentric equilateral system") {
  const CoefficientPath b0 = meyer_schmidt_system({EREFamily::lagrange, 1.0, 0.0});
  const CoefficientPath be = meyer_schmidt_system({EREFamily::lagrange, 1.0, 0.1});
  const CoefficientPath d = be.plus(b0, -1.0);

  for (double s_sign : {1.0, -1.0}) {
    const BrakeSymmetryData sym = ere_brake_symmetry(s_sign * Mat::Identity(4, 4));
    const DecompositionReport rep = decomposition_check(b0, d, sym);
    CHECK(rep.product_residual < 1e-7);
    CHECK(rep.block_residual[0] < 1e-7);
    CHECK(rep.block_residual[1] < 1e-7);

    // The half-period determinants are the block determinants:
    // det(gamma Zhat+, Z+) = (-1)^n det(c), det(gamma Zhat-, Z-) = det(b).
    CHECK(rep.half_ratio_plus ==
          doctest::Approx(rep.det_c[1] / rep.det_c[0]).epsilon(1e-9));
    CHECK(rep.half_ratio_minus ==
          doctest::Approx(rep.det_b[1] / rep.det_b[0]).epsilon(1e-9));
  }
}

TEST_CASE("nonsymmetric perturbations are rejected") {
  const CoefficientPath b0 = meyer_schmidt_system({EREFamily::lagrange, 1.0, 0.0});
  const BrakeSymmetryData sym = ere_brake_symmetry(Mat::Identity(4, 4));
  const CoefficientPath bad(2, 2.0 * M_PI, [](double t) -> Mat {
    Mat m = Mat::Zero(4, 4);
    m(2, 2) = t;
    return m;
  });
  CHECK_THROWS_AS(decomposition_check(b0, bad, sym), InvalidSymmetry);
}

TEST_CASE("degenerate factors are identified") {
  // At the equilateral parameter 3/4 the -1-periodic base problem is
  // degenerate, so the splitting has a vanishing factor.
  const CoefficientPath b0 = meyer_schmidt_system({EREFamily::lagrange, 0.75, 0.0});
  const BrakeSymmetryData sym = ere_brake_symmetry(-Mat::Identity(4, 4));
  CHECK_THROWS_AS(decomposition_check(b0, CoefficientPath::zero(2, 2.0 * M_PI), sym),
                  DegenerateFactor);
}

TEST_CASE("periodic index decomposes into the half-period indices") {
  // Move between two equilateral base systems: i(-1) drops from 2 to 0, so
  // the relative periodic index is -2 and must match the sum of the two
  // half-period crossing counts.
  const CoefficientPath b_lo = meyer_schmidt_system({EREFamily::lagrange, 0.3, 0.0});
  const CoefficientPath b_hi = meyer_schmidt_system({EREFamily::lagrange, 5.0, 0.0});
  const CoefficientPath d = b_hi.plus(b_lo, -1.0);

  const int i_lo = maslov_index_minus_one(b_lo, 160);
  const int i_hi = maslov_index_minus_one(b_hi, 160);
  CHECK(i_lo == 2);
  CHECK(i_hi == 0);

  const CoefficientPath b_half = b_lo.restricted(M_PI);
  const CoefficientPath d_half = d.restricted(M_PI);
  const int plus = relative_morse_index(b_half, d_half, ere_half_boundary(true), 220);
  const int minus = relative_morse_index(b_half, d_half, ere_half_boundary(false), 220);
  CHECK(plus + minus == i_hi - i_lo);
}

TEST_CASE("monodromy kernel splits into the Lagrangian intersections") {
  // At the collinear +1-degeneracy the two-dimensional kernel of
  // gamma(2pi) - I is carried by the V+/V- half-period intersections.
  const double delta = degeneracy_anchors(2).phi;
  const CoefficientPath b = meyer_schmidt_system({EREFamily::euler, delta, 0.0});
  const SymplecticPath gamma = fundamental_solution(b, 1e-11, {M_PI});
  const Mat at_half = gamma.dense_eval(M_PI);
  const Mat mono = gamma.monodromy();

  int kernel_dim = 0;
  Eigen::JacobiSVD<Mat> svd(Mat(mono - Mat::Identity(4, 4)));
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (svd.singularValues()(i) < 1e-6) ++kernel_dim;
  }
  REQUIRE(kernel_dim == 2);

  Mat v_plus = Mat::Zero(4, 2), v_minus = Mat::Zero(4, 2);
  v_plus(0, 0) = 1;
  v_plus(3, 1) = 1;
  v_minus(1, 0) = 1;
  v_minus(2, 1) = 1;
  const int dim_pp = intersection_dim(v_plus, Mat(at_half * v_plus));
  const int dim_mm = intersection_dim(v_minus, Mat(at_half * v_minus));
  CHECK(dim_pp + dim_mm == kernel_dim);
}
