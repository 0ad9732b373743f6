#include "hamstab/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hamstab/errors.hpp"

namespace hamstab {

namespace {

std::vector<double> merge_kinks(const std::vector<double>& a, const std::vector<double>& b,
                                double length) {
  std::set<double> s;
  for (double k : a) {
    if (k > 0.0 && k < length) s.insert(k);
  }
  for (double k : b) {
    if (k > 0.0 && k < length) s.insert(k);
  }
  return {s.begin(), s.end()};
}

}  // namespace

CoefficientPath::CoefficientPath(int n, double length, std::function<Mat(double)> eval,
                                 std::vector<double> kinks)
    : n_(n),
      length_(length),
      eval_(std::make_shared<const std::function<Mat(double)>>(std::move(eval))),
      kinks_(std::move(kinks)) {
  if (n_ <= 0 || length_ <= 0.0) {
    throw DimensionError("CoefficientPath: need n > 0 and T > 0");
  }
  std::sort(kinks_.begin(), kinks_.end());
  const Mat probe = (*eval_)(0.0);
  if (probe.rows() != 2 * n_ || probe.cols() != 2 * n_) {
    throw DimensionError("CoefficientPath: evaluator dimension does not match n");
  }
}

double CoefficientPath::symmetry_defect(int samples) const {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = length_ * i / (samples - 1.0);
    const Mat m = (*eval_)(t);
    worst = std::max(worst, max_abs(m - m.transpose()));
  }
  return worst;
}

CoefficientPath CoefficientPath::zero(int n, double length) {
  return constant(Mat::Zero(2 * n, 2 * n), length);
}

CoefficientPath CoefficientPath::constant(const Mat& value, double length) {
  if (value.rows() != value.cols() || value.rows() % 2 != 0 || value.rows() == 0) {
    throw DimensionError("CoefficientPath::constant: matrix must be 2n x 2n");
  }
  const int n = static_cast<int>(value.rows()) / 2;
  Mat v = value;
  return CoefficientPath(n, length, [v](double) { return v; });
}

CoefficientPath CoefficientPath::scaled(double c) const {
  auto base = eval_;
  // The explicit Mat return materializes the product before the temporary
  // from (*base)(t) dies.
  return CoefficientPath(
      n_, length_, [base, c](double t) -> Mat { return c * (*base)(t); }, kinks_);
}

CoefficientPath CoefficientPath::plus(const CoefficientPath& other, double alpha) const {
  if (other.n_ != n_) throw DimensionError("CoefficientPath::plus: mismatched n");
  const double len = std::min(length_, other.length_);
  auto a = eval_;
  auto b = other.eval_;
  return CoefficientPath(
      n_, len, [a, b, alpha](double t) -> Mat { return (*a)(t) + alpha * (*b)(t); },
      merge_kinks(kinks_, other.kinks_, len));
}

CoefficientPath CoefficientPath::restricted(double new_length) const {
  if (new_length <= 0.0 || new_length > length_ + 1e-12) {
    throw DimensionError("CoefficientPath::restricted: bad length");
  }
  auto base = eval_;
  std::vector<double> kk;
  for (double k : kinks_) {
    if (k < new_length) kk.push_back(k);
  }
  return CoefficientPath(n_, new_length, [base](double t) { return (*base)(t); }, kk);
}

CoefficientPath CoefficientPath::conjugated(const Mat& u) const {
  if (u.rows() != 2 * n_ || u.cols() != 2 * n_) {
    throw DimensionError("CoefficientPath::conjugated: U must be 2n x 2n");
  }
  auto base = eval_;
  Mat uc = u;
  return CoefficientPath(
      n_, length_, [base, uc](double t) -> Mat { return uc.transpose() * (*base)(t) * uc; },
      kinks_);
}

CoefficientPath CoefficientPath::commuting_part() const {
  auto base = eval_;
  const Mat j = symplectic_form(n_);
  return CoefficientPath(
      n_, length_, [base, j](double t) -> Mat {
        const Mat d = (*base)(t);
        return 0.5 * (d - j * d * j);
      },
      kinks_);
}

CoefficientPath CoefficientPath::anticommuting_part() const {
  auto base = eval_;
  const Mat j = symplectic_form(n_);
  return CoefficientPath(
      n_, length_, [base, j](double t) -> Mat {
        const Mat d = (*base)(t);
        return 0.5 * (d + j * d * j);
      },
      kinks_);
}

namespace {

int upper_entries(int dim) { return dim * (dim + 1) / 2; }

Mat unpack_upper(const std::vector<double>& row, std::size_t offset, int dim) {
  Mat m(dim, dim);
  std::size_t k = offset;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      m(i, j) = row[k];
      m(j, i) = row[k];
      ++k;
    }
  }
  return m;
}

/// Natural cubic spline through (t_i, v_i) on one smooth segment; evaluated
/// per matrix entry.
struct SegmentSpline {
  std::vector<double> t;
  std::vector<Mat> v;    // values
  std::vector<Mat> m2;   // second derivatives

  void build() {
    const std::size_t n = t.size();
    m2.assign(n, Mat::Zero(v[0].rows(), v[0].cols()));
    if (n < 3) return;
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t[i + 1] - t[i];
    // Thomas solve of the tridiagonal system, entrywise over matrices.
    std::vector<double> diag(n, 2.0), sub(n, 0.0), sup(n, 0.0);
    std::vector<Mat> rhs(n, Mat::Zero(v[0].rows(), v[0].cols()));
    for (std::size_t i = 1; i + 1 < n; ++i) {
      sub[i] = h[i - 1] / (h[i - 1] + h[i]);
      sup[i] = h[i] / (h[i - 1] + h[i]);
      rhs[i] = 6.0 / (h[i - 1] + h[i]) *
               ((v[i + 1] - v[i]) / h[i] - (v[i] - v[i - 1]) / h[i - 1]);
    }
    std::vector<double> cp(n, 0.0);
    std::vector<Mat> dp(n, Mat::Zero(v[0].rows(), v[0].cols()));
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double denom = diag[i] - sub[i] * cp[i - 1];
      cp[i] = sup[i] / denom;
      dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m2[i] = dp[i] - cp[i] * m2[i + 1];
      if (i == 1) break;
    }
  }

  Mat eval(double x) const {
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    if (i + 1 >= t.size()) i = t.size() - 2;
    const double h = t[i + 1] - t[i];
    const double a = (t[i + 1] - x) / h;
    const double b = (x - t[i]) / h;
    return a * v[i] + b * v[i + 1] +
           ((a * a * a - a) * m2[i] + (b * b * b - b) * m2[i + 1]) * (h * h) / 6.0;
  }
};

struct SampledTable {
  std::vector<SegmentSpline> segments;
  std::vector<double> breaks;  // segment boundaries, first = 0, last = T

  Mat eval(double x) const {
    std::size_t seg = 0;
    while (seg + 2 < breaks.size() && x > breaks[seg + 1]) ++seg;
    return segments[seg].eval(std::clamp(x, breaks.front(), breaks.back()));
  }
};

}  // namespace

std::pair<CoefficientPath, CoefficientPath> load_sampled_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open coefficient file: " + path);

  std::vector<double> kinks;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      if (key == "kinks:") {
        double k;
        while (hs >> k) kinks.push_back(k);
      }
      continue;
    }
    std::istringstream ls(line);
    std::vector<double> row;
    double x;
    while (ls >> x) row.push_back(x);
    if (!ls.eof()) throw FormatError("non-numeric data at line " + std::to_string(lineno));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw FormatError("need at least two sample rows");

  const std::size_t cols = rows[0].size();
  int dim = 0;
  for (int d = 2; d <= 64; d += 2) {
    if (1 + 2 * static_cast<std::size_t>(upper_entries(d)) == cols) {
      dim = d;
      break;
    }
  }
  if (dim == 0) {
    throw FormatError("row width " + std::to_string(cols) +
                      " does not match 1 + 2 * dim*(dim+1)/2 for any even dim");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw FormatError("ragged row at index " + std::to_string(i));
    if (i > 0 && rows[i][0] <= rows[i - 1][0]) {
      throw FormatError("sample times must be strictly increasing");
    }
  }
  if (std::abs(rows.front()[0]) > 1e-12) throw FormatError("first sample must be at t = 0");
  const double length = rows.back()[0];

  std::sort(kinks.begin(), kinks.end());
  std::vector<double> breaks = {0.0};
  for (double k : kinks) {
    if (k > 1e-12 && k < length - 1e-12) breaks.push_back(k);
  }
  breaks.push_back(length);

  auto build = [&](std::size_t offset) {
    auto table = std::make_shared<SampledTable>();
    table->breaks = breaks;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
      SegmentSpline seg;
      for (const auto& row : rows) {
        if (row[0] >= breaks[s] - 1e-12 && row[0] <= breaks[s + 1] + 1e-12) {
          seg.t.push_back(row[0]);
          seg.v.push_back(unpack_upper(row, offset, dim));
        }
      }
      if (seg.t.size() < 2) {
        throw FormatError("segment between declared kinks has fewer than two samples");
      }
      seg.build();
      table->segments.push_back(std::move(seg));
    }
    return CoefficientPath(dim / 2, length,
                           [table](double t) { return table->eval(t); }, kinks);
  };

  return {build(1), build(1 + upper_entries(dim))};
}

void save_sampled_coefficients(const std::string& path, const CoefficientPath& b,
                               const CoefficientPath& d, int rows) {
  if (b.n() != d.n()) throw DimensionError("save_sampled_coefficients: mismatched n");
  const double length = std::min(b.length(), d.length());
  const int dim = b.dim();

  std::set<double> grid;
  for (int i = 0; i < rows; ++i) grid.insert(length * i / (rows - 1.0));
  std::vector<double> kinks = merge_kinks(b.kink_points(), d.kink_points(), length);
  for (double k : kinks) grid.insert(k);

  std::ofstream out(path);
  if (!out) throw FormatError("cannot write coefficient file: " + path);
  out.precision(17);
  if (!kinks.empty()) {
    out << "# kinks:";
    for (double k : kinks) out << ' ' << k;
    out << '\n';
  }
  for (double t : grid) {
    out << t;
    const Mat bm = b(t);
    const Mat dm = d(t);
    for (const Mat* m : {&bm, &dm}) {
      for (int i = 0; i < dim; ++i) {
        for (int jj = i; jj < dim; ++jj) out << ' ' << (*m)(i, jj);
      }
    }
    out << '\n';
  }
}

}  // namespace hamstab
