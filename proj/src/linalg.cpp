#include "hamstab/linalg.hpp"

#include <cmath>
#include <vector>

#include "hamstab/errors.hpp"

namespace hamstab {

Mat symplectic_form(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return j;
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double symplectic_defect(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw DimensionError("symplectic_defect: matrix must be square of even dimension");
  }
  const int n = static_cast<int>(m.rows()) / 2;
  const Mat j = symplectic_form(n);
  return max_abs(m.transpose() * j * m - j);
}

Mat symplectic_inverse(const Mat& m) {
  const int n = static_cast<int>(m.rows()) / 2;
  const Mat j = symplectic_form(n);
  return -j * m.transpose() * j;
}

DetResult lu_det(const Mat& m) {
  Eigen::PartialPivLU<Mat> lu(m);
  const auto& u = lu.matrixLU();
  double log_abs = 0.0;
  int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double p = u(i, i);
    if (p == 0.0) return {0.0, -std::numeric_limits<double>::infinity(), 0};
    log_abs += std::log(std::abs(p));
    if (p < 0.0) sign = -sign;
  }
  return {sign * std::exp(log_abs), log_abs, sign};
}

Mat orthonormal_columns(const Mat& frame) {
  Eigen::HouseholderQR<Mat> qr(frame);
  Mat q = qr.householderQ() * Mat::Identity(frame.rows(), frame.cols());
  const Mat r = qr.matrixQR().topRows(frame.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < frame.cols(); ++c) {
    if (r(c, c) < 0.0) q.col(c) = -q.col(c);
  }
  return q;
}

double subspace_distance(const Mat& a, const Mat& b) {
  const Mat qa = orthonormal_columns(a);
  const Mat qb = orthonormal_columns(b);
  const Mat diff = qa * qa.transpose() - qb * qb.transpose();
  Eigen::JacobiSVD<Mat> svd(diff);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

int signature(const Mat& sym, double tol, int* zeros) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.transpose()));
  const Vec ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  int sig = 0, nz = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol * scale) {
      ++nz;
    } else {
      sig += ev(i) > 0 ? 1 : -1;
    }
  }
  if (zeros) *zeros = nz;
  return sig;
}

std::pair<double, double> extreme_singular_values(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return {0.0, 0.0};
  return {s(s.size() - 1), s(0)};
}

Mat joint_diagonalizer(const Mat& a, const Mat& b, double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> ea(0.5 * (a + a.transpose()));
  Mat q = ea.eigenvectors();
  const Vec ev = ea.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());

  Eigen::Index i = 0;
  while (i < ev.size()) {
    Eigen::Index j = i + 1;
    while (j < ev.size() && std::abs(ev(j) - ev(i)) <= cluster_tol * scale) ++j;
    if (j - i > 1) {
      const Mat qc = q.middleCols(i, j - i);
      Eigen::SelfAdjointEigenSolver<Mat> eb(qc.transpose() * (0.5 * (b + b.transpose())) * qc);
      q.middleCols(i, j - i) = qc * eb.eigenvectors();
    }
    i = j;
  }
  return q;
}

Mat rotation_matrix(const Vec& theta) {
  const int n = static_cast<int>(theta.size());
  Mat r = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double c = std::cos(theta(j));
    const double s = std::sin(theta(j));
    r(j, j) = c;
    r(n + j, n + j) = c;
    r(j, n + j) = -s;
    r(n + j, j) = s;
  }
  return r;
}

}  // namespace hamstab
