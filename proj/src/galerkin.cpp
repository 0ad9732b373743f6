#include <algorithm>
#include <cmath>
#include <vector>

#include "hamstab/errors.hpp"
#include "hamstab/kernels.hpp"
#include "hamstab/oracle.hpp"
#include "hamstab/parallel.hpp"
#include "hamstab/quadrature.hpp"

// Spectral truncation of the boundary problem: the basis e_{j,k}(t) =
// cos(lambda_{j,k} t) e_j + sin(lambda_{j,k} t) e_{n+j}, lambda_{j,k} =
// (theta_j + k pi)/T, |k| <= N, diagonalizes the free operator with
// eigenvalues lambda_{j,k}. The bilinear forms of the coefficient paths are
// filled by Gauss-Legendre panels resolving the fastest trig product, with
// one rank-1 kernel update per node and coefficient entry.

namespace hamstab {

namespace {

struct Accumulator {
  std::vector<double> int_b;  // (1/T) * integral of <B e, e'> (row-major)
  std::vector<double> int_d;
};

}  // namespace

GalerkinTruncation galerkin_truncation(const CoefficientPath& b, const CoefficientPath& d,
                                       const BoundaryPair& boundary, int truncation) {
  if (truncation < 1) throw DimensionError("galerkin_truncation: N must be >= 1");
  const int n = boundary.n();
  if (b.n() != n || d.n() != n) throw DimensionError("galerkin_truncation: mismatched n");
  const double horizon = b.length();
  const int per_branch = 2 * truncation + 1;
  const int dim = n * per_branch;

  // Work in the normal-form basis; the pair's U conjugates the coefficients.
  const CoefficientPath bt = b.conjugated(boundary.basis_change);
  const CoefficientPath dt = d.conjugated(boundary.basis_change);

  std::vector<double> lambdas(static_cast<std::size_t>(dim));
  std::vector<std::pair<int, int>> labels(static_cast<std::size_t>(dim));
  for (int j = 0; j < n; ++j) {
    for (int k = -truncation; k <= truncation; ++k) {
      const int idx = j * per_branch + (k + truncation);
      lambdas[static_cast<std::size_t>(idx)] = (boundary.theta(j) + k * M_PI) / horizon;
      labels[static_cast<std::size_t>(idx)] = {j, k};
    }
  }

  // Quadrature panels: fastest integrand frequency is 2 * lambda_max, so
  // panels scale with N; kink points split segments.
  std::vector<double> stops = {0.0, horizon};
  for (double k : bt.kink_points()) stops.push_back(k);
  for (double k : dt.kink_points()) stops.push_back(k);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  const GaussRule& rule = gauss_rule(10);
  struct Node {
    double t;
    double w;
  };
  std::vector<Node> nodes;
  for (std::size_t seg = 0; seg + 1 < stops.size(); ++seg) {
    const double lo = stops[seg], hi = stops[seg + 1];
    if (hi - lo < 1e-14 * horizon) continue;
    const int panels =
        std::max(8, static_cast<int>(std::ceil(2.5 * (truncation + 1) * (hi - lo) / horizon)));
    const double h = (hi - lo) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double mid = lo + (pnl + 0.5) * h;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        nodes.push_back({mid + 0.5 * h * rule.nodes[q], 0.5 * h * rule.weights[q] / horizon});
      }
    }
  }

  const std::size_t mat_len = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  const int workers = std::min<int>(max_threads(), 8);
  std::vector<Accumulator> acc(static_cast<std::size_t>(workers));
  for (auto& a : acc) {
    a.int_b.assign(mat_len, 0.0);
    a.int_d.assign(mat_len, 0.0);
  }

  const std::size_t chunk = (nodes.size() + static_cast<std::size_t>(workers) - 1) /
                            static_cast<std::size_t>(workers);
  parallel_for(static_cast<std::size_t>(workers), [&](std::size_t wi) {
    Accumulator& a = acc[wi];
    std::vector<double> cosv(static_cast<std::size_t>(n) * per_branch);
    std::vector<double> sinv(static_cast<std::size_t>(n) * per_branch);
    const std::size_t begin = wi * chunk;
    const std::size_t end = std::min(nodes.size(), begin + chunk);
    for (std::size_t q = begin; q < end; ++q) {
      const double t = nodes[q].t;
      const double w = nodes[q].w;
      const Mat bm = bt(t);
      const Mat dm = dt(t);
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < per_branch; ++k) {
          const double ang = lambdas[static_cast<std::size_t>(j * per_branch + k)] * t;
          cosv[static_cast<std::size_t>(j * per_branch + k)] = std::cos(ang);
          sinv[static_cast<std::size_t>(j * per_branch + k)] = std::sin(ang);
        }
      }
      // Block (jr, jc): <M e_{jc,k}, e_{jr,k'}> expands into four rank-1
      // trig updates weighted by the coefficient entries.
      for (int jr = 0; jr < n; ++jr) {
        const double* cr = cosv.data() + jr * per_branch;
        const double* sr = sinv.data() + jr * per_branch;
        for (int jc = 0; jc < n; ++jc) {
          const double* cc = cosv.data() + jc * per_branch;
          const double* sc = sinv.data() + jc * per_branch;
          double* blk_b = a.int_b.data() +
                          static_cast<std::size_t>(jr * per_branch) * dim + jc * per_branch;
          double* blk_d = a.int_d.data() +
                          static_cast<std::size_t>(jr * per_branch) * dim + jc * per_branch;
          const std::size_t lda = static_cast<std::size_t>(dim);
          const std::size_t len = static_cast<std::size_t>(per_branch);
          kernels::ger(w * bm(jr, jc), cr, len, cc, len, blk_b, lda);
          kernels::ger(w * bm(jr, n + jc), cr, len, sc, len, blk_b, lda);
          kernels::ger(w * bm(n + jr, jc), sr, len, cc, len, blk_b, lda);
          kernels::ger(w * bm(n + jr, n + jc), sr, len, sc, len, blk_b, lda);
          kernels::ger(w * dm(jr, jc), cr, len, cc, len, blk_d, lda);
          kernels::ger(w * dm(jr, n + jc), cr, len, sc, len, blk_d, lda);
          kernels::ger(w * dm(n + jr, jc), sr, len, cc, len, blk_d, lda);
          kernels::ger(w * dm(n + jr, n + jc), sr, len, sc, len, blk_d, lda);
        }
      }
    }
  });

  for (int wi = 1; wi < workers; ++wi) {
    kernels::axpy(1.0, acc[static_cast<std::size_t>(wi)].int_b.data(), acc[0].int_b.data(),
                  mat_len);
    kernels::axpy(1.0, acc[static_cast<std::size_t>(wi)].int_d.data(), acc[0].int_d.data(),
                  mat_len);
  }

  GalerkinTruncation out;
  out.truncation = truncation;
  out.labels = std::move(labels);
  out.matrix_b =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          acc[0].int_b.data(), dim, dim)
          .eval();
  out.matrix_b = -out.matrix_b;
  out.matrix_bd = out.matrix_b -
                  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(acc[0].int_d.data(), dim, dim);
  for (int i = 0; i < dim; ++i) {
    out.matrix_b(i, i) += lambdas[static_cast<std::size_t>(i)];
    out.matrix_bd(i, i) += lambdas[static_cast<std::size_t>(i)];
  }
  return out;
}

double galerkin_determinant(const CoefficientPath& b, const CoefficientPath& d,
                            const BoundaryPair& boundary, int truncation) {
  const GalerkinTruncation tr = galerkin_truncation(b, d, boundary, truncation);

  auto logdet = [&](const Mat& m, const char* which) {
    Eigen::PartialPivLU<Mat> lu(m);
    const auto& u = lu.matrixLU();
    double log_abs = 0.0;
    int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    double min_piv = std::numeric_limits<double>::infinity();
    double max_piv = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double p = std::abs(u(i, i));
      min_piv = std::min(min_piv, p);
      max_piv = std::max(max_piv, p);
      if (p == 0.0) {
        throw TruncationResonance(std::string("galerkin_determinant: singular ") + which +
                                  "; retry with N+1");
      }
      log_abs += std::log(p);
      if (u(i, i) < 0.0) sign = -sign;
    }
    if (min_piv < 1e-12 * max_piv) {
      throw TruncationResonance(std::string("galerkin_determinant: near-singular ") + which +
                                "; retry with N+1");
    }
    return std::make_pair(log_abs, sign);
  };

  const auto [log_b, sign_b] = logdet(tr.matrix_b, "matrix_b");
  const auto [log_bd, sign_bd] = logdet(tr.matrix_bd, "matrix_bd");
  return sign_b * sign_bd * std::exp(log_bd - log_b);
}

}  // namespace hamstab
