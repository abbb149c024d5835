#pragma once

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lexgraph/decomposition.hpp"
#include "lexgraph/mgs.hpp"
#include "lexgraph/norms.hpp"
#include "lexgraph/stats.hpp"

namespace lexgraph {

struct FrameRow {
  std::string word;
  Label label = Label::outside;
  bool in_mgs = false;
  NormValues norms;
};

/// Dictionary words joined with their structural role and norms.
struct AnalysisFrame {
  std::vector<FrameRow> rows;
  std::size_t with_norms = 0;
  /// Fraction of dictionary words carrying at least one norm value.
  double coverage = 0;
  bool has_mgs = false;
  std::vector<std::string> warnings;
};

/// Norms for words outside the dictionary are ignored with a warning.
AnalysisFrame attach_norms(const DefGraph& g, const Decomposition& d, const NormsTable& norms,
                           const GroundingSet* mgs = nullptr);

/// Two-group split of frame rows: true = first group, false = second,
/// nullopt = row not part of the comparison.
struct GroupSplit {
  std::string name;
  std::string first;
  std::string second;
  std::function<std::optional<bool>(const FrameRow&)> member;
};

GroupSplit kernel_vs_rest();           // K vs D - K
GroupSplit core_vs_rest();             // C vs D - C
GroupSplit mgs_vs_rest();              // MGS vs D - MGS
GroupSplit core_vs_satellites();       // C vs S
GroupSplit mgs_vs_rest_of_kernel();    // MGS vs K - MGS

struct GroupComparison {
  std::string split;
  NormVariable variable{};
  double mean_first = 0;
  double mean_second = 0;
  std::size_t n_first = 0;
  std::size_t n_second = 0;
  double f = 0;
  int df_between = 0;
  int df_within = 0;
  double p = 1;
};

/// Two-group one-way ANOVA on raw values. Throws InsufficientDataError
/// naming the group and variable when a group has fewer than two values.
GroupComparison anova_compare(const AnalysisFrame& f, const GroupSplit& split, NormVariable variable);

struct CorrelationMatrix {
  std::array<std::array<std::optional<double>, 5>, 5> r{};
  std::array<std::array<std::size_t, 5>, 5> pairs{};
};

/// Pairwise-complete Pearson correlations; cells with fewer than three
/// complete pairs are left empty.
CorrelationMatrix correlation_matrix(const AnalysisFrame& f);

struct RegressionStep {
  NormVariable variable{};
  double standardized_beta = 0;
  double bivariate_r = 0;
  double incremental_r2 = 0;
  double p = 1;
};

struct RegressionReport {
  std::string split;
  std::vector<RegressionStep> steps;
  double total_r2 = 0;
  std::size_t n = 0;
  std::vector<std::string> warnings;
};

/// Forward stepwise OLS of the 0/1 membership indicator (1 = first group)
/// on standardized norms. Rows missing any predictor are dropped
/// (listwise). Needs at least 10 complete rows.
RegressionReport stepwise_regression(const AnalysisFrame& f, const GroupSplit& split,
                                     const std::vector<NormVariable>& predictors, double entry_p = 0.05);

/// Mean of a variable over disjoint structural strata.
struct StratumMean {
  std::string stratum;
  std::size_t n = 0;
  std::optional<double> mean;
};

/// Strata: MGS, Core (non-MGS), Satellites (non-MGS), Kernel, Rest (D - K).
std::vector<StratumMean> strata_means(const AnalysisFrame& f, NormVariable variable);

void write_anova_table(std::ostream& out, const std::vector<GroupComparison>& rows);
void write_regression_table(std::ostream& out, const RegressionReport& r);
void write_strata_table(std::ostream& out, const AnalysisFrame& f);
void write_correlation_table(std::ostream& out, const CorrelationMatrix& m);

std::string comparison_json(const GroupComparison& c);
std::string regression_json(const RegressionReport& r);

}  // namespace lexgraph
