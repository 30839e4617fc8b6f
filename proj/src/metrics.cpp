#include "privleak/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace privleak {

double ln_gamma(double x) {
  // Lanczos, g=5, 6 coefficients. Accurate to ~1e-10 for x > 0.
  static const double cof[6] = {76.18009172947146,    -86.50532032941677,
                                24.01409824083091,    -1.231739572450155,
                                0.1208650973866179e-2, -0.5395239384953e-5};
  double y = x;
  double tmp = x + 5.5;
  tmp -= (x + 0.5) * std::log(tmp);
  double ser = 1.000000000190015;
  for (int j = 0; j < 6; ++j) ser += cof[j] / ++y;
  return -tmp + std::log(2.5066282746310005 * ser / x);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-10;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete_beta: a, b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete_beta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_survival(int df1, int df2, double x) {
  if (df1 < 1 || df2 < 1) throw std::invalid_argument("f_survival: dfs must be >= 1");
  if (x < 0.0) throw std::invalid_argument("f_survival: x must be >= 0");
  if (x == 0.0) return 1.0;
  return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * x));
}

double f_quantile(int df1, int df2, double significance) {
  if (df1 < 1 || df2 < 1) throw std::invalid_argument("f_quantile: dfs must be >= 1");
  if (!(significance > 0.0 && significance < 1.0)) {
    throw std::invalid_argument("f_quantile: significance outside (0,1)");
  }
  double hi = 1.0;
  while (f_survival(df1, df2, hi) > significance) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("f_quantile: bracket failure");
  }
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f_survival(df1, df2, mid) > significance) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-9 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

namespace {

void check_pred_labels(std::span<const int> predictions, std::span<const int> labels,
                       int num_classes) {
  if (predictions.empty()) throw std::invalid_argument("metrics: empty input");
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("metrics: predictions/labels length mismatch");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes || predictions[i] < 0 ||
        predictions[i] >= num_classes) {
      throw std::invalid_argument("metrics: class index out of range");
    }
  }
}

}  // namespace

double macro_f1(std::span<const int> predictions, std::span<const int> labels,
                int num_classes) {
  check_pred_labels(predictions, labels, num_classes);
  std::vector<long> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == labels[i]) {
      ++tp[labels[i]];
    } else {
      ++fp[predictions[i]];
      ++fn[labels[i]];
    }
  }
  double sum = 0.0;
  for (int k = 0; k < num_classes; ++k) {
    const double denom = 2.0 * tp[k] + fp[k] + fn[k];
    sum += denom > 0.0 ? 2.0 * tp[k] / denom : 0.0;
  }
  return sum / num_classes;
}

double micro_f1(std::span<const int> predictions, std::span<const int> labels,
                int num_classes) {
  check_pred_labels(predictions, labels, num_classes);
  long tp = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == labels[i]) ++tp;
  }
  // Micro precision == micro recall for single-label classification.
  return static_cast<double>(tp) / labels.size();
}

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw std::invalid_argument("accuracy: bad input lengths");
  }
  long hit = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == labels[i]) ++hit;
  }
  return static_cast<double>(hit) / labels.size();
}

double variance(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("variance: empty input");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  double s = 0.0;
  for (double v : values) s += (v - mean) * (v - mean);
  return s / values.size();
}

AnovaSummary anova_two_way(const std::vector<std::vector<double>>& grid,
                           double significance) {
  const std::size_t r = grid.size();
  if (r < 2) throw std::invalid_argument("anova_two_way: need at least 2 rows");
  const std::size_t c = grid.front().size();
  if (c < 2) throw std::invalid_argument("anova_two_way: need at least 2 columns");
  for (const auto& row : grid) {
    if (row.size() != c) throw std::invalid_argument("anova_two_way: ragged grid");
  }

  double grand = 0.0;
  for (const auto& row : grid)
    for (double v : row) grand += v;
  grand /= static_cast<double>(r * c);

  std::vector<double> row_mean(r, 0.0), col_mean(c, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      row_mean[i] += grid[i][j];
      col_mean[j] += grid[i][j];
    }
  }
  for (auto& m : row_mean) m /= c;
  for (auto& m : col_mean) m /= r;

  AnovaSummary s;
  for (std::size_t i = 0; i < r; ++i) {
    s.ss_row += c * (row_mean[i] - grand) * (row_mean[i] - grand);
  }
  for (std::size_t j = 0; j < c; ++j) {
    s.ss_col += r * (col_mean[j] - grand) * (col_mean[j] - grand);
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double resid = grid[i][j] - row_mean[i] - col_mean[j] + grand;
      s.ss_error += resid * resid;
      s.ss_total += (grid[i][j] - grand) * (grid[i][j] - grand);
    }
  }

  s.df_row = static_cast<int>(r) - 1;
  s.df_col = static_cast<int>(c) - 1;
  s.df_error = s.df_row * s.df_col;
  s.df_total = static_cast<int>(r * c) - 1;

  const double ms_error = s.ss_error / s.df_error;
  if (ms_error > 0.0) {
    s.f_row = (s.ss_row / s.df_row) / ms_error;
    s.f_col = (s.ss_col / s.df_col) / ms_error;
    s.p_row = f_survival(s.df_row, s.df_error, s.f_row);
    s.p_col = f_survival(s.df_col, s.df_error, s.f_col);
  } else {
    // Degenerate grid with zero residual variance: report F=0, P=1.
    s.f_row = s.f_col = 0.0;
    s.p_row = s.p_col = 1.0;
  }
  s.fcrit_row = f_quantile(s.df_row, s.df_error, significance);
  s.fcrit_col = f_quantile(s.df_col, s.df_error, significance);
  return s;
}

}  // namespace privleak
