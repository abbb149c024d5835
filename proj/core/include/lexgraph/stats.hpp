#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lexgraph::stats {

/// I_x(a, b), the regularized incomplete beta function (continued fraction).
double regularized_incomplete_beta(double a, double b, double x);

/// P(F <= x) for an F(d1, d2) variable.
double f_cdf(double x, double d1, double d2);

/// P(F > x), computed directly rather than as 1 - cdf to keep small tails.
double f_upper_tail(double x, double d1, double d2);

double mean(std::span<const double> xs);
/// Sample variance (n - 1 denominator); 0 for fewer than two values.
double variance(std::span<const double> xs);

/// Pearson correlation; nullopt when either side has zero variance or fewer
/// than two pairs are given.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct AnovaResult {
  std::vector<double> means;
  std::vector<std::size_t> counts;
  double ss_between = 0;
  double ss_within = 0;
  double f = 0;
  int df_between = 0;
  int df_within = 0;
  double p = 1;
};

/// One-way ANOVA over `groups`. Requires at least two groups and more
/// observations than groups.
AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

struct OlsFit {
  /// intercept followed by one coefficient per column
  std::vector<double> coefficients;
  double r2 = 0;
  std::size_t rank = 0;
};

/// Least squares of y on an intercept plus `columns` (column-pivoted QR).
OlsFit ols(std::span<const std::vector<double>> columns, std::span<const double> y);

/// z-scores with sample standard deviation; nullopt for a constant column.
std::optional<std::vector<double>> standardize(std::span<const double> xs);

struct StepwiseStep {
  std::size_t predictor = 0;
  double incremental_r2 = 0;
  /// Partial F-test p-value at entry.
  double p = 1;
  double partial_f = 0;
};

struct StepwiseResult {
  std::vector<StepwiseStep> steps;
  /// Standardized coefficients of the final model, by predictor index;
  /// nullopt for predictors that were not selected.
  std::vector<std::optional<double>> standardized_beta;
  /// Bivariate correlation of each predictor with the outcome.
  std::vector<std::optional<double>> bivariate_r;
  double total_r2 = 0;
  std::size_t n = 0;
  std::vector<std::string> warnings;
};

/// Forward selection on standardized variables: at each step enter the
/// predictor with the largest R^2 gain if its partial F-test p <= entry_p.
/// Constant or collinear predictors are skipped with a warning.
StepwiseResult forward_stepwise(std::span<const std::vector<double>> predictors, std::span<const double> y,
                                double entry_p, std::span<const std::string> names = {});

}  // namespace lexgraph::stats
