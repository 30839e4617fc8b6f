#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace privleak {

/// Two-way ANOVA without replication over an r x c score grid.
/// Rows and columns are the two factors; the residual takes
/// (r-1)(c-1) degrees of freedom.
struct AnovaSummary {
  double ss_row = 0, ss_col = 0, ss_error = 0, ss_total = 0;
  int df_row = 0, df_col = 0, df_error = 0, df_total = 0;
  double f_row = 0, f_col = 0;
  double p_row = 1, p_col = 1;
  double fcrit_row = 0, fcrit_col = 0;
};

/// ln Gamma(x) for x > 0 (Lanczos approximation).
double ln_gamma(double x);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Upper tail P(F(df1, df2) >= x).
double f_survival(int df1, int df2, double x);

/// x with P(F(df1, df2) >= x) = significance, found by bisection.
double f_quantile(int df1, int df2, double significance = 0.05);

/// Unweighted mean over classes of 2PR/(P+R). Classes with no true or
/// predicted instances contribute 0.
double macro_f1(std::span<const int> predictions, std::span<const int> labels,
                int num_classes);

/// Globally pooled F1 (equals accuracy for single-label classification).
double micro_f1(std::span<const int> predictions, std::span<const int> labels,
                int num_classes);

double accuracy(std::span<const int> predictions, std::span<const int> labels);

/// Population variance (divide by n).
double variance(std::span<const double> values);

AnovaSummary anova_two_way(const std::vector<std::vector<double>>& grid,
                           double significance = 0.05);

}  // namespace privleak
