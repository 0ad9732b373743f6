#include "hamstab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hamstab/errors.hpp"
#include "hamstab/propagator.hpp"
#include "hamstab/quadrature.hpp"

namespace hamstab {

namespace {

constexpr double kKernelRelTol = 1e-6;
// A kernel point must be sharp: sigma_min at the polished point has to drop
// well below the sigma_min level at the bracket ends. This rejects the
// "determinant decays smoothly to zero" regime (no eigenvalue there).
constexpr double kSharpness = 1e-3;

struct Probe {
  double det;
  double smin;
  double smax;
};

double brent_root(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, double xtol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 128; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

struct MinResult {
  double x;
  double fx;
};

/// Brent minimization with an early-out: once `patience` iterations passed
/// and the best value still exceeds `give_up_value`, stop looking.
MinResult brent_minimize(const std::function<double(double)>& f, double a, double b, double xtol,
                         int max_iter, int patience, double give_up_value) {
  const double gold = 0.3819660112501051;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = xtol * std::abs(x) + 1e-15;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    if (it >= patience && fx > give_up_value) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm > x ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = x >= xm ? a - x : b - x;
      d = gold * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; w = x; x = u;
      fv = fw; fw = fx; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; w = u;
        fv = fw; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx};
}

struct KernelPoint {
  double s;
  bool even_order;
};

/// Zeros of det(U(s)) on [lo, hi]: sign brackets refined by Brent on the
/// determinant, |det| dips (potential even-order roots, invisible to the
/// sign scan) refined by minimizing sigma_min(U(s)). Every candidate must
/// pass the kernel threshold and the sharpness test against its bracket.
std::vector<KernelPoint> locate_kernel_points(const std::function<Probe(double)>& probe,
                                              double lo, double hi, int grid, double xtol) {
  std::vector<double> s(grid + 1);
  std::vector<Probe> p(grid + 1);
  double smax_global = 0.0;
  for (int i = 0; i <= grid; ++i) {
    s[i] = lo + (hi - lo) * i / grid;
    p[i] = probe(s[i]);
    smax_global = std::max(smax_global, p[i].smax);
  }
  const double kernel_tol = kKernelRelTol * std::max(1.0, smax_global);

  std::vector<KernelPoint> found;
  auto push_unique = [&](double x, bool even) {
    for (auto& k : found) {
      if (std::abs(k.s - x) < 1e-9 * (1.0 + std::abs(x))) return;
    }
    found.push_back({x, even});
  };

  auto det_fn = [&](double x) { return probe(x).det; };
  auto smin_fn = [&](double x) { return probe(x).smin; };

  for (int i = 0; i < grid; ++i) {
    const bool bracket = (p[i].det > 0) != (p[i + 1].det > 0) || p[i].det == 0.0;
    if (!bracket) continue;
    const double root =
        p[i].det == 0.0 ? s[i]
                        : brent_root(det_fn, s[i], s[i + 1], p[i].det, p[i + 1].det, xtol);
    const Probe pr = probe(root);
    const double neighborhood = std::min(p[i].smin, p[i + 1].smin);
    if (pr.smin < kernel_tol && pr.smin < kSharpness * std::max(neighborhood, kernel_tol)) {
      push_unique(root, false);
    }
  }

  for (int i = 1; i < grid; ++i) {
    const double a0 = std::abs(p[i - 1].det), a1 = std::abs(p[i].det), a2 = std::abs(p[i + 1].det);
    if (!(a1 < a0 && a1 < a2)) continue;
    bool near_known = false;
    for (const auto& k : found) {
      if (k.s > s[i - 1] - 1e-12 && k.s < s[i + 1] + 1e-12) near_known = true;
    }
    if (near_known) continue;
    const MinResult m =
        brent_minimize(smin_fn, s[i - 1], s[i + 1], 1e-12, 64, 16, 50.0 * kernel_tol);
    const double neighborhood = std::min(p[i - 1].smin, p[i + 1].smin);
    if (m.fx < kernel_tol && m.fx < kSharpness * std::max(neighborhood, kernel_tol)) {
      push_unique(m.x, true);
    }
  }

  std::sort(found.begin(), found.end(),
            [](const KernelPoint& a, const KernelPoint& b) { return a.s < b.s; });
  return found;
}

std::vector<Vec> near_kernel(const Mat& u, double* sigma_max_out = nullptr) {
  Eigen::JacobiSVD<Mat> svd(u, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  if (sigma_max_out) *sigma_max_out = smax;
  std::vector<Vec> out;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) < kKernelRelTol * std::max(1.0, smax)) out.push_back(svd.matrixV().col(i));
  }
  return out;
}

Probe probe_of(const Mat& u) {
  const DetResult det = lu_det(u);
  const auto [smin, smax] = extreme_singular_values(u);
  return {det.value, smin, smax};
}

/// int_0^T <W(t) phi_i, phi_l> dt for phi_i(t) = gamma(t) xi_i.
Mat crossing_form(const SymplecticPath& gamma, const CoefficientPath& weight,
                  const std::vector<Vec>& xis) {
  const int k = static_cast<int>(xis.size());
  Mat basis(gamma.generator().dim(), k);
  for (int i = 0; i < k; ++i) basis.col(i) = xis[static_cast<std::size_t>(i)];
  auto integrand = [&](double t) -> Mat {
    const Mat phi = gamma.dense_eval(t) * basis;
    return phi.transpose() * weight(t) * phi;
  };
  return adaptive_integrate_matrix(integrand, 0.0, gamma.length(), 1e-9, weight.kink_points());
}

int form_signature_checked(const Mat& form, const char* what) {
  int zeros = 0;
  const int sig = signature(form, 1e-7, &zeros);
  if (zeros > 0) {
    throw AccuracyError(std::string(what) +
                        ": crossing form has a numerically zero eigenvalue; cannot orient "
                        "the crossing");
  }
  return sig;
}

}  // namespace

EigenvalueList shoot_eigenvalues(const CoefficientPath& b, const CoefficientPath& d,
                                 const BoundaryPair& boundary, double lo, double hi,
                                 double tol) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DimensionError("shoot_eigenvalues: window must be finite and nonempty");
  }
  const double horizon = b.length();
  const double ptol = std::min(1e-11, tol * 0.1);

  auto bm = [&](double lambda) -> Mat {
    const SymplecticPath g = fundamental_solution(b.plus(d, lambda), ptol);
    return boundary_matrix(g.monodromy(), boundary);
  };
  auto probe = [&](double lambda) { return probe_of(bm(lambda)); };

  const int grid = std::max<int>(
      64, static_cast<int>(std::ceil((hi - lo) * horizon / M_PI * 8.0 * b.n())));

  EigenvalueList list;
  list.window_lo = lo;
  list.window_hi = hi;
  list.horizon = horizon;
  list.n = b.n();

  for (const KernelPoint& kp : locate_kernel_points(probe, lo, hi, grid, tol)) {
    const auto kernel = near_kernel(bm(kp.s));
    if (kernel.empty()) continue;
    list.values.push_back(kp.s);
    list.multiplicities.push_back(static_cast<int>(kernel.size()));
    list.suspected_even_order.push_back(kp.even_order);
  }
  return list;
}

double hurwitz_zeta(int m, double a) {
  if (m < 2 || !(a > 0.0)) throw DimensionError("hurwitz_zeta: need m >= 2, a > 0");
  double sum = 0.0;
  int shift = 0;
  while (a + shift < 12.0) {
    sum += std::pow(a + shift, -m);
    ++shift;
  }
  const double inv = 1.0 / (a + shift);
  double tail = std::pow(inv, m - 1) / (m - 1);
  tail += 0.5 * std::pow(inv, m);
  tail += m / 12.0 * std::pow(inv, m + 1);
  tail -= m * (m + 1.0) * (m + 2.0) / 720.0 * std::pow(inv, m + 3);
  tail += m * (m + 1.0) * (m + 2.0) * (m + 3.0) * (m + 4.0) / 30240.0 * std::pow(inv, m + 5);
  return sum + tail;
}

double trigamma(double x) { return hurwitz_zeta(2, x); }

EigenSumResult eigen_sum(const EigenvalueList& eigs, int m, double tail_requested) {
  if (m < 2) throw DimensionError("eigen_sum: trace class requires m >= 2");
  if (eigs.horizon <= 0.0) throw DimensionError("eigen_sum: list lacks the horizon length");

  double window_sum = 0.0;
  std::vector<double> pos, neg;  // magnitudes, expanded by multiplicity
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const double lam = eigs.values[i];
    window_sum += eigs.multiplicities[i] * std::pow(lam, -m);
    for (int r = 0; r < eigs.multiplicities[i]; ++r) {
      (lam > 0 ? pos : neg).push_back(std::abs(lam));
    }
  }
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());

  const double step = M_PI / eigs.horizon;
  const int sign_flip = (m % 2 == 1) ? -1 : 1;

  // Ladder continuation: each of the n outermost magnitudes mu continues as
  // mu + k pi/T, k >= 1, so its tail is (T/pi)^m zeta(m, 1 + mu T/pi). With
  // `offset` the anchors start one rung further in, predicting the same tail;
  // the difference between the two predictions estimates the error.
  auto tail_from = [&](const std::vector<double>& mags, int offset) {
    double t = 0.0;
    const int avail = static_cast<int>(mags.size()) - offset * eigs.n;
    const int use = std::min(eigs.n, avail);
    for (int i = 0; i < use; ++i) {
      const double mu = mags[static_cast<std::size_t>(offset * eigs.n + i)];
      t += std::pow(1.0 / step, m) * hurwitz_zeta(m, 1.0 + offset + mu / step);
    }
    return t;
  };

  const double tail_pos = tail_from(pos, 0);
  const double tail_neg = sign_flip * tail_from(neg, 0);

  double err = 1e-15 * (1.0 + std::abs(window_sum));
  if (static_cast<int>(pos.size()) >= 2 * eigs.n && eigs.n > 0) {
    err += std::abs(tail_from(pos, 0) - tail_from(pos, 1));
  } else if (!pos.empty()) {
    err += 0.5 * std::abs(tail_pos);
  }
  if (static_cast<int>(neg.size()) >= 2 * eigs.n && eigs.n > 0) {
    err += std::abs(tail_from(neg, 0) - tail_from(neg, 1));
  } else if (!neg.empty()) {
    err += 0.5 * std::abs(tail_neg);
  }

  if (err > tail_requested) {
    throw WindowTooSmall("eigen_sum: achieved tail bound " + std::to_string(err) +
                         " exceeds requested " + std::to_string(tail_requested) +
                         "; enlarge the search window");
  }
  return {window_sum + tail_pos + tail_neg, tail_pos + tail_neg, err};
}

namespace {

struct CrossingEngine {
  std::function<CoefficientPath(double)> coeff_at;           // full coefficient at parameter s
  std::function<Mat(const Mat&)> boundary_of;                // monodromy -> test matrix
  std::function<std::vector<Vec>(const Mat&)> kernel_of;     // test matrix -> kernel basis
  const CoefficientPath* weight;
  double ptol;
  const char* what;

  SymplecticPath propagate(double s) const { return fundamental_solution(coeff_at(s), ptol); }

  /// Counts the near-zero spectral values of the problem at parameter s:
  /// roots mu of det(boundary(gamma for coeff + mu I)) inside (-window,
  /// window), split into negative / at-zero / total (with multiplicity).
  struct FlowCount {
    int total = 0;
    int negative = 0;
    bool on_zero = false;
  };

  FlowCount count_small_eigenvalues(double s, double window) const {
    const CoefficientPath base = coeff_at(s);
    const Mat eye = Mat::Identity(base.dim(), base.dim());
    const CoefficientPath shift = CoefficientPath::constant(eye, base.length());
    auto bm = [&](double mu) {
      return boundary_of(fundamental_solution(base.plus(shift, mu), ptol).monodromy());
    };
    auto probe = [&](double mu) { return probe_of(bm(mu)); };
    FlowCount fc;
    for (const KernelPoint& kp : locate_kernel_points(probe, -window, window, 48, 1e-12)) {
      const int mult = static_cast<int>(near_kernel(bm(kp.s)).size());
      fc.total += mult;
      if (std::abs(kp.s) < 1e-8) {
        fc.on_zero = true;
      } else if (kp.s < 0.0) {
        fc.negative += mult;
      }
    }
    return fc;
  }

  /// Net spectral flow through a crossing whose first-order form is
  /// degenerate: difference of negative near-zero eigenvalue counts on the
  /// two sides. `side` restricts to the right side only (departure terms).
  int resolve_flow(double s0, int dim, bool right_side_only) const {
    const double horizon = coeff_at(s0).length();
    for (double eps : {1e-4, 4e-4, 2e-3, 8e-3}) {
      double window = 0.45 * M_PI / horizon;
      for (int adjust = 0; adjust < 4; ++adjust) {
        const FlowCount after = count_small_eigenvalues(s0 + eps, window);
        if (after.on_zero) break;  // grow eps
        if (after.total > dim) {
          window *= 0.5;
          continue;
        }
        if (after.total < dim) {
          window *= 2.0;
          continue;
        }
        if (right_side_only) return after.negative;
        const FlowCount before = count_small_eigenvalues(s0 - eps, window);
        if (before.on_zero || before.total != dim) break;
        return after.negative - before.negative;
      }
    }
    throw AccuracyError(std::string(what) +
                        ": cannot resolve the spectral flow through the degenerate crossing");
  }

  MorseIndexResult run(double lo, double hi, int grid, double xtol) const {
    auto probe = [&](double s) { return probe_of(boundary_of(propagate(s).monodromy())); };
    MorseIndexResult result;
    result.index = 0;
    for (const KernelPoint& kp : locate_kernel_points(probe, lo, hi, grid, xtol)) {
      if (kp.s > hi - 1e-8) {
        throw DegenerateEndpoint(std::string(what) + ": kernel crossing at the far endpoint");
      }
      if (kp.s < lo + 1e-8) {
        throw DegenerateBaseProblem(std::string(what) + ": kernel crossing at the base point");
      }
      const SymplecticPath gamma = propagate(kp.s);
      const auto xis = kernel_of(boundary_of(gamma.monodromy()));
      if (xis.empty()) continue;
      const Mat form = crossing_form(gamma, *weight, xis);
      int zeros = 0;
      int sig = signature(form, 1e-7, &zeros);
      if (zeros > 0) {
        // First-order analysis cannot orient this crossing (e.g. a
        // non-semisimple collision); fall back to counting the actual flow.
        sig = resolve_flow(kp.s, static_cast<int>(xis.size()), false);
      }
      result.crossings.push_back({kp.s, static_cast<int>(xis.size()), kp.even_order, sig});
      result.index += sig;
    }
    return result;
  }
};

}  // namespace

MorseIndexResult relative_morse_index_detailed(const CoefficientPath& b,
                                               const CoefficientPath& d,
                                               const BoundaryPair& boundary, int grid,
                                               double tol) {
  const double ptol = std::min(1e-10, tol);
  auto coeff_at = [b, d](double s) { return b.plus(d, s); };
  auto bmat = [&boundary](const Mat& mono) { return boundary_matrix(mono, boundary); };

  const Mat u0 = bmat(fundamental_solution(coeff_at(0.0), ptol).monodromy());
  const Mat u1 = bmat(fundamental_solution(coeff_at(1.0), ptol).monodromy());
  {
    const auto [smin0, smax0] = extreme_singular_values(u0);
    if (smin0 < 1e-8 * std::max(1.0, smax0)) {
      throw DegenerateBaseProblem("relative_morse_index: base problem degenerate");
    }
    const auto [smin1, smax1] = extreme_singular_values(u1);
    if (smin1 < 1e-8 * std::max(1.0, smax1)) {
      throw DegenerateEndpoint("relative_morse_index: endpoint problem degenerate");
    }
  }

  CrossingEngine engine;
  engine.coeff_at = coeff_at;
  engine.boundary_of = bmat;
  const int n = boundary.n();
  const Mat z0 = boundary.v0.columns();
  engine.kernel_of = [n, z0](const Mat& u) {
    // Kernel direction (a; c): gamma(T) Z0 a = -Z1 c, so xi = Z0 a generates
    // the boundary-problem solution.
    std::vector<Vec> out;
    for (const Vec& v : near_kernel(u)) {
      Vec xi = z0 * v.head(n);
      const double norm = xi.norm();
      if (norm > 1e-12) out.push_back(xi / norm);
    }
    return out;
  };
  engine.weight = &d;
  engine.ptol = ptol;
  engine.what = "relative_morse_index";

  MorseIndexResult result = engine.run(0.0, 1.0, grid, 1e-12);

  const double f1 = lu_det(u1).value / lu_det(u0).value;
  result.parity_consistent = ((f1 > 0.0) == (result.index % 2 == 0));
  if (!result.parity_consistent) {
    throw ParityMismatch("relative_morse_index: determinant-ratio sign " +
                         std::to_string(f1) + " disagrees with crossing count " +
                         std::to_string(result.index));
  }
  return result;
}

int relative_morse_index(const CoefficientPath& b, const CoefficientPath& d,
                         const BoundaryPair& boundary, int grid, double tol) {
  return relative_morse_index_detailed(b, d, boundary, grid, tol).index;
}

MorseIndexResult periodic_morse_index_detailed(const CoefficientPath& b, const Mat& s_matrix,
                                               int grid, double tol) {
  const int dim = b.dim();
  if (s_matrix.rows() != dim || s_matrix.cols() != dim) {
    throw DimensionError("periodic_morse_index: S must match the coefficient dimension");
  }
  const double ptol = std::min(1e-10, tol);
  const Mat id = Mat::Identity(dim, dim);
  const Mat s_copy = s_matrix;

  auto coeff_at = [b](double s) { return b.scaled(s); };
  auto bmat = [s_copy, id](const Mat& mono) -> Mat { return s_copy * mono - id; };

  {
    const Mat u1 = bmat(fundamental_solution(b, ptol).monodromy());
    const auto [smin1, smax1] = extreme_singular_values(u1);
    if (smin1 < 1e-8 * std::max(1.0, smax1)) {
      throw DegenerateEndpoint("periodic_morse_index: S gamma(T) - I singular at s = 1");
    }
  }

  CrossingEngine engine;
  engine.coeff_at = coeff_at;
  engine.boundary_of = bmat;
  engine.kernel_of = [](const Mat& u) { return near_kernel(u); };
  engine.weight = &b;
  engine.ptol = ptol;
  engine.what = "periodic_morse_index";

  // Departure term at s = 0: the constants fixed by S span ker(A|_{E_S});
  // as s grows, each kernel direction's eigenvalue moves opposite to the
  // form <mean(B) xi, xi>, so the positive directions are the ones counted.
  MorseIndexResult result;
  result.index = 0;
  const std::vector<Vec> fixed = near_kernel(s_matrix - id);
  if (!fixed.empty()) {
    const Mat mean_b = adaptive_integrate_matrix([&](double t) -> Mat { return b(t); }, 0.0,
                                                 b.length(), 1e-10, b.kink_points());
    const int k = static_cast<int>(fixed.size());
    Mat form(k, k);
    for (int i = 0; i < k; ++i) {
      for (int l = 0; l < k; ++l) {
        form(i, l) = fixed[static_cast<std::size_t>(i)].dot(
            mean_b * fixed[static_cast<std::size_t>(l)]);
      }
    }
    int zeros = 0;
    int departures = 0;
    const int sig = signature(form, 1e-7, &zeros);
    if (zeros > 0) {
      // A zero mean-form direction leaves at higher order; count the
      // branches that actually sit below zero just after the start.
      departures = engine.resolve_flow(0.0, k, true);
    } else {
      departures = (k + sig) / 2;
    }
    result.index += departures;
    result.crossings.push_back({0.0, k, false, departures});
  }

  const double inner_lo = fixed.empty() ? 0.0 : 1e-4;
  MorseIndexResult inner = engine.run(inner_lo, 1.0, grid, 1e-12);
  result.index += inner.index;
  for (const auto& c : inner.crossings) result.crossings.push_back(c);
  return result;
}

int periodic_morse_index(const CoefficientPath& b, const Mat& s_matrix, int grid, double tol) {
  return periodic_morse_index_detailed(b, s_matrix, grid, tol).index;
}

int maslov_index_plus_one(const CoefficientPath& b, int grid, double tol) {
  const Mat id = Mat::Identity(b.dim(), b.dim());
  return periodic_morse_index(b, id, grid, tol) - b.n();
}

int maslov_index_minus_one(const CoefficientPath& b, int grid, double tol) {
  const Mat id = Mat::Identity(b.dim(), b.dim());
  return periodic_morse_index(b, -id, grid, tol);
}

}  // namespace hamstab
