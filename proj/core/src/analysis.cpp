#include "lexgraph/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>

#include <nlohmann/json.hpp>

#include "lexgraph/errors.hpp"

namespace lexgraph {

AnalysisFrame attach_norms(const DefGraph& g, const Decomposition& d, const NormsTable& norms, const GroundingSet* mgs) {
  AnalysisFrame f;
  f.has_mgs = mgs != nullptr;
  std::vector<char> in_mgs(g.vertex_count(), 0);
  if (mgs)
    for (auto v : mgs->words) in_mgs[v] = 1;

  f.rows.reserve(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    FrameRow row;
    row.word = g.name(static_cast<VertexId>(v));
    row.label = d.label[v];
    row.in_mgs = in_mgs[v] != 0;
    if (auto it = norms.rows.find(row.word); it != norms.rows.end()) row.norms = it->second;
    if (row.norms.any()) ++f.with_norms;
    f.rows.push_back(std::move(row));
  }
  f.coverage = f.rows.empty() ? 0.0 : static_cast<double>(f.with_norms) / static_cast<double>(f.rows.size());

  std::size_t extra = 0;
  std::string first_extra;
  for (const auto& [word, values] : norms.rows) {
    if (!g.find(word)) {
      if (extra++ == 0) first_extra = word;
    }
  }
  if (extra > 0) {
    f.warnings.push_back(std::to_string(extra) + " norms row(s) for words not in the dictionary ignored (first: '" +
                         first_extra + "')");
  }
  return f;
}

GroupSplit kernel_vs_rest() {
  return {"K vs D-K", "K", "D-K", [](const FrameRow& r) -> std::optional<bool> { return r.label != Label::outside; }};
}

GroupSplit core_vs_rest() {
  return {"C vs D-C", "C", "D-C", [](const FrameRow& r) -> std::optional<bool> { return r.label == Label::core; }};
}

GroupSplit mgs_vs_rest() {
  return {"MGS vs D-MGS", "MGS", "D-MGS", [](const FrameRow& r) -> std::optional<bool> { return r.in_mgs; }};
}

GroupSplit core_vs_satellites() {
  return {"C vs S", "C", "S", [](const FrameRow& r) -> std::optional<bool> {
            if (r.label == Label::outside) return std::nullopt;
            return r.label == Label::core;
          }};
}

GroupSplit mgs_vs_rest_of_kernel() {
  return {"MGS vs K-MGS", "MGS", "K-MGS", [](const FrameRow& r) -> std::optional<bool> {
            if (r.label == Label::outside) return std::nullopt;
            return r.in_mgs;
          }};
}

GroupComparison anova_compare(const AnalysisFrame& f, const GroupSplit& split, NormVariable variable) {
  std::vector<double> first, second;
  for (const auto& row : f.rows) {
    auto side = split.member(row);
    const auto& value = row.norms[variable];
    if (!side || !value) continue;
    (*side ? first : second).push_back(*value);
  }
  auto require = [&](const std::vector<double>& xs, const std::string& group) {
    if (xs.size() < 2)
      throw InsufficientDataError("group " + group + " of '" + split.name + "' has " + std::to_string(xs.size()) +
                                  " value(s) for " + std::string(variable_name(variable)) + "; need at least 2");
  };
  require(first, split.first);
  require(second, split.second);

  std::vector<std::vector<double>> groups{std::move(first), std::move(second)};
  auto a = stats::one_way_anova(groups);
  GroupComparison c;
  c.split = split.name;
  c.variable = variable;
  c.mean_first = a.means[0];
  c.mean_second = a.means[1];
  c.n_first = a.counts[0];
  c.n_second = a.counts[1];
  c.f = a.f;
  c.df_between = a.df_between;
  c.df_within = a.df_within;
  c.p = a.p;
  return c;
}

CorrelationMatrix correlation_matrix(const AnalysisFrame& f) {
  CorrelationMatrix m;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i; j < 5; ++j) {
      std::vector<double> x, y;
      for (const auto& row : f.rows) {
        const auto& a = row.norms.values[i];
        const auto& b = row.norms.values[j];
        if (a && b) {
          x.push_back(*a);
          y.push_back(*b);
        }
      }
      m.pairs[i][j] = m.pairs[j][i] = x.size();
      if (x.size() < 3) continue;
      m.r[i][j] = m.r[j][i] = stats::pearson(x, y);
    }
  }
  return m;
}

RegressionReport stepwise_regression(const AnalysisFrame& f, const GroupSplit& split,
                                     const std::vector<NormVariable>& predictors, double entry_p) {
  std::vector<std::vector<double>> columns(predictors.size());
  std::vector<double> outcome;
  std::size_t dropped = 0;
  for (const auto& row : f.rows) {
    auto side = split.member(row);
    if (!side) continue;
    bool complete = true;
    for (auto v : predictors) complete = complete && row.norms[v].has_value();
    if (!complete) {
      ++dropped;
      continue;
    }
    for (std::size_t j = 0; j < predictors.size(); ++j) columns[j].push_back(*row.norms[predictors[j]]);
    outcome.push_back(*side ? 1.0 : 0.0);
  }
  if (outcome.size() < 10) {
    throw InsufficientDataError("stepwise regression for '" + split.name + "' has " + std::to_string(outcome.size()) +
                                " complete row(s); need at least 10");
  }

  std::vector<std::string> names;
  for (auto v : predictors) names.emplace_back(variable_name(v));
  auto fit = stats::forward_stepwise(columns, outcome, entry_p, names);

  RegressionReport r;
  r.split = split.name;
  r.n = fit.n;
  r.total_r2 = fit.total_r2;
  r.warnings = std::move(fit.warnings);
  if (dropped > 0) r.warnings.push_back(std::to_string(dropped) + " row(s) with missing norms dropped (listwise)");
  for (const auto& step : fit.steps) {
    RegressionStep s;
    s.variable = predictors[step.predictor];
    s.standardized_beta = fit.standardized_beta[step.predictor].value_or(0.0);
    s.bivariate_r = fit.bivariate_r[step.predictor].value_or(0.0);
    s.incremental_r2 = step.incremental_r2;
    s.p = step.p;
    r.steps.push_back(s);
  }
  return r;
}

std::vector<StratumMean> strata_means(const AnalysisFrame& f, NormVariable variable) {
  struct Acc {
    std::string name;
    std::function<bool(const FrameRow&)> member;
    double sum = 0;
    std::size_t n = 0;
  };
  std::vector<Acc> acc;
  if (f.has_mgs) acc.push_back({"MGS", [](const FrameRow& r) { return r.in_mgs; }});
  acc.push_back({f.has_mgs ? "Core (non-MGS)" : "Core",
                 [&f](const FrameRow& r) { return r.label == Label::core && !(f.has_mgs && r.in_mgs); }});
  acc.push_back({f.has_mgs ? "Satellites (non-MGS)" : "Satellites",
                 [&f](const FrameRow& r) { return r.label == Label::satellite && !(f.has_mgs && r.in_mgs); }});
  acc.push_back({"Kernel", [](const FrameRow& r) { return r.label != Label::outside; }});
  acc.push_back({"Rest (D-K)", [](const FrameRow& r) { return r.label == Label::outside; }});

  for (const auto& row : f.rows) {
    const auto& value = row.norms[variable];
    if (!value) continue;
    for (auto& a : acc) {
      if (a.member(row)) {
        a.sum += *value;
        ++a.n;
      }
    }
  }
  std::vector<StratumMean> out;
  for (const auto& a : acc) {
    StratumMean m{a.name, a.n, std::nullopt};
    if (a.n > 0) m.mean = a.sum / static_cast<double>(a.n);
    out.push_back(m);
  }
  return out;
}

namespace {

std::string fmt(double x, int precision = 3) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

std::string fmt_p(double p) {
  if (p < 0.001) return "<.001";
  return fmt(p, 3);
}

}  // namespace

void write_anova_table(std::ostream& out, const std::vector<GroupComparison>& rows) {
  out << std::left << std::setw(16) << "comparison" << std::setw(14) << "variable" << std::right << std::setw(12)
      << "mean(1st)" << std::setw(12) << "mean(2nd)" << std::setw(8) << "n1" << std::setw(8) << "n2" << std::setw(12)
      << "F" << std::setw(10) << "df" << std::setw(8) << "p" << "\n";
  for (const auto& c : rows) {
    out << std::left << std::setw(16) << c.split << std::setw(14) << variable_name(c.variable) << std::right
        << std::setw(12) << fmt(c.mean_first, 2) << std::setw(12) << fmt(c.mean_second, 2) << std::setw(8)
        << c.n_first << std::setw(8) << c.n_second << std::setw(12) << fmt(c.f, 3) << std::setw(10)
        << (std::to_string(c.df_between) + "," + std::to_string(c.df_within)) << std::setw(8) << fmt_p(c.p) << "\n";
  }
}

void write_regression_table(std::ostream& out, const RegressionReport& r) {
  out << "Stepwise regression: " << r.split << " (n=" << r.n << ", total R2=" << fmt(r.total_r2, 3) << ")\n";
  out << std::left << std::setw(6) << "step" << std::setw(14) << "variable" << std::setw(11) << "direction"
      << std::right << std::setw(10) << "beta" << std::setw(10) << "r" << std::setw(10) << "R2 step" << std::setw(8)
      << "p" << "\n";
  int k = 1;
  for (const auto& s : r.steps) {
    std::string direction = s.standardized_beta >= 0 ? "+" : "-";
    if ((s.standardized_beta >= 0) != (s.bivariate_r >= 0)) direction += " (reversed)";
    out << std::left << std::setw(6) << k++ << std::setw(14) << variable_name(s.variable) << std::setw(11)
        << direction << std::right << std::setw(10) << fmt(s.standardized_beta, 3) << std::setw(10)
        << fmt(s.bivariate_r, 3) << std::setw(10) << fmt(s.incremental_r2, 4) << std::setw(8) << fmt_p(s.p) << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
}

void write_strata_table(std::ostream& out, const AnalysisFrame& f) {
  out << std::left << std::setw(22) << "stratum";
  for (auto v : kAllNormVariables) out << std::right << std::setw(14) << variable_name(v);
  out << "\n";
  std::vector<std::vector<StratumMean>> columns;
  for (auto v : kAllNormVariables) columns.push_back(strata_means(f, v));
  for (std::size_t i = 0; i < columns.front().size(); ++i) {
    out << std::left << std::setw(22) << columns.front()[i].stratum;
    for (const auto& col : columns)
      out << std::right << std::setw(14) << (col[i].mean ? fmt(*col[i].mean, 2) : std::string("-"));
    out << "\n";
  }
}

void write_correlation_table(std::ostream& out, const CorrelationMatrix& m) {
  out << std::left << std::setw(14) << "";
  for (auto v : kAllNormVariables) out << std::right << std::setw(14) << variable_name(v);
  out << "\n";
  for (std::size_t i = 0; i < 5; ++i) {
    out << std::left << std::setw(14) << variable_name(kAllNormVariables[i]);
    for (std::size_t j = 0; j < 5; ++j)
      out << std::right << std::setw(14) << (m.r[i][j] ? fmt(*m.r[i][j], 3) : std::string("n/a"));
    out << "\n";
  }
}

std::string comparison_json(const GroupComparison& c) {
  nlohmann::json j = {{"split", c.split},
                      {"variable", variable_name(c.variable)},
                      {"mean_first", c.mean_first},
                      {"mean_second", c.mean_second},
                      {"n_first", c.n_first},
                      {"n_second", c.n_second},
                      {"F", std::isinf(c.f) ? nlohmann::json("inf") : nlohmann::json(c.f)},
                      {"df", {c.df_between, c.df_within}},
                      {"p", c.p}};
  return j.dump();
}

std::string regression_json(const RegressionReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"variable", variable_name(s.variable)},
                     {"beta", s.standardized_beta},
                     {"r", s.bivariate_r},
                     {"r2_step", s.incremental_r2},
                     {"p", s.p}});
  }
  nlohmann::json j = {{"split", r.split}, {"n", r.n}, {"total_r2", r.total_r2}, {"steps", steps}, {"warnings", r.warnings}};
  return j.dump();
}

}  // namespace lexgraph
