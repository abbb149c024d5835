#include "lexgraph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "lexgraph/errors.hpp"

namespace lexgraph::stats {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 20000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1) < kEps) return h;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw PreconditionError("incomplete beta needs positive shape parameters");
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
  return 1 - front * beta_continued_fraction(b, a, 1 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
  if (x <= 0) return 0;
  if (std::isinf(x)) return 1;
  return regularized_incomplete_beta(d1 / 2, d2 / 2, d1 * x / (d1 * x + d2));
}

double f_upper_tail(double x, double d1, double d2) {
  if (x <= 0) return 1;
  if (std::isinf(x)) return 0;
  return regularized_incomplete_beta(d2 / 2, d1 / 2, d2 / (d2 + d1 * x));
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0;
  const double m = mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("pearson: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw PreconditionError("ANOVA needs at least two groups");
  AnovaResult r;
  std::size_t total_n = 0;
  double grand_sum = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw InsufficientDataError("ANOVA group is empty");
    r.means.push_back(mean(g));
    r.counts.push_back(g.size());
    total_n += g.size();
    grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  if (total_n <= groups.size()) throw InsufficientDataError("ANOVA needs more observations than groups");
  const double grand_mean = grand_sum / static_cast<double>(total_n);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const double dm = r.means[k] - grand_mean;
    r.ss_between += static_cast<double>(groups[k].size()) * dm * dm;
    for (double x : groups[k]) r.ss_within += (x - r.means[k]) * (x - r.means[k]);
  }
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(total_n - groups.size());
  // Sums of squares below this scale are rounding noise.
  const double scale = 1e-12 * (r.ss_between + r.ss_within + 1e-300);
  if (r.ss_between <= scale) {
    r.f = 0;
    r.p = 1;
  } else if (r.ss_within <= scale) {
    r.f = std::numeric_limits<double>::infinity();
    r.p = 0;
  } else {
    r.f = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
    r.p = f_upper_tail(r.f, r.df_between, r.df_within);
  }
  return r;
}

OlsFit ols(std::span<const std::vector<double>> columns, std::span<const double> y) {
  const auto n = y.size();
  const auto p = columns.size();
  Eigen::MatrixXd X(n, p + 1);
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    X(i, 0) = 1;
    Y(i) = y[i];
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (columns[j].size() != n) throw PreconditionError("ols: column length mismatch");
    for (std::size_t i = 0; i < n; ++i) X(i, j + 1) = columns[j][i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  Eigen::VectorXd beta = qr.solve(Y);

  OlsFit fit;
  fit.rank = static_cast<std::size_t>(qr.rank());
  fit.coefficients.assign(beta.data(), beta.data() + beta.size());
  const double my = Y.mean();
  const double sst = (Y.array() - my).square().sum();
  const double sse = (Y - X * beta).squaredNorm();
  fit.r2 = sst > 0 ? std::clamp(1 - sse / sst, 0.0, 1.0) : 0;
  return fit;
}

std::optional<std::vector<double>> standardize(std::span<const double> xs) {
  const double sd = std::sqrt(variance(xs));
  if (!(sd > 0)) return std::nullopt;
  const double m = mean(xs);
  std::vector<double> z;
  z.reserve(xs.size());
  for (double x : xs) z.push_back((x - m) / sd);
  return z;
}

StepwiseResult forward_stepwise(std::span<const std::vector<double>> predictors, std::span<const double> y,
                                double entry_p, std::span<const std::string> names) {
  const auto n = y.size();
  const auto k = predictors.size();
  auto name_of = [&](std::size_t j) { return j < names.size() ? names[j] : "x" + std::to_string(j); };

  StepwiseResult result;
  result.n = n;
  result.standardized_beta.assign(k, std::nullopt);
  result.bivariate_r.assign(k, std::nullopt);

  auto zy = standardize(y);
  if (!zy) {
    result.warnings.push_back("outcome is constant; nothing to explain");
    return result;
  }

  std::vector<std::optional<std::vector<double>>> z(k);
  std::vector<char> eligible(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    if (predictors[j].size() != n) throw PreconditionError("stepwise: predictor length mismatch");
    z[j] = standardize(predictors[j]);
    if (!z[j]) {
      result.warnings.push_back("predictor " + name_of(j) + " is constant; skipped");
      continue;
    }
    eligible[j] = 1;
    result.bivariate_r[j] = pearson(*z[j], *zy);
  }

  std::vector<std::size_t> selected;
  std::vector<std::vector<double>> columns;
  double r2 = 0;
  constexpr double kPerfect = 1 - 1e-12;

  while (r2 < kPerfect) {
    std::optional<std::size_t> best;
    double best_r2 = r2;
    for (std::size_t j = 0; j < k; ++j) {
      if (!eligible[j]) continue;
      if (!columns.empty()) {
        // Candidate explained by the current model: entering it would make
        // the design rank-deficient.
        if (ols(columns, *z[j]).r2 > 1 - 1e-10) {
          eligible[j] = 0;
          result.warnings.push_back("predictor " + name_of(j) + " is collinear with selected predictors; skipped");
          continue;
        }
      }
      auto trial = columns;
      trial.push_back(*z[j]);
      double trial_r2 = ols(trial, *zy).r2;
      if (!best || trial_r2 > best_r2) {
        best = j;
        best_r2 = trial_r2;
      }
    }
    if (!best) break;

    const auto model_size = columns.size() + 1;
    if (n <= model_size + 1) break;
    const double df_resid = static_cast<double>(n - model_size - 1);
    const double gain = std::max(0.0, best_r2 - r2);
    StepwiseStep step;
    step.predictor = *best;
    step.incremental_r2 = gain;
    if (1 - best_r2 <= 1e-15) {
      step.partial_f = std::numeric_limits<double>::infinity();
      step.p = 0;
    } else {
      step.partial_f = gain / ((1 - best_r2) / df_resid);
      step.p = f_upper_tail(step.partial_f, 1, df_resid);
    }
    if (step.p > entry_p) break;

    selected.push_back(*best);
    columns.push_back(*z[*best]);
    eligible[*best] = 0;
    r2 = best_r2;
    result.steps.push_back(step);
  }

  result.total_r2 = 0;
  for (const auto& s : result.steps) result.total_r2 += s.incremental_r2;
  if (!columns.empty()) {
    auto fit = ols(columns, *zy);
    for (std::size_t i = 0; i < selected.size(); ++i) result.standardized_beta[selected[i]] = fit.coefficients[i + 1];
  }
  return result;
}

}  // namespace lexgraph::stats
