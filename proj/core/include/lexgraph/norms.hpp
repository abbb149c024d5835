#pragma once

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexgraph {

/// The five psycholinguistic variables, in CSV column order.
enum class NormVariable { aoa, concreteness, imageability, freq_written, freq_oral };

inline constexpr std::array<NormVariable, 5> kAllNormVariables = {
    NormVariable::aoa, NormVariable::concreteness, NormVariable::imageability,
    NormVariable::freq_written, NormVariable::freq_oral};

std::string_view variable_name(NormVariable v);
NormVariable parse_variable(std::string_view name);

/// Raw units (ratings and frequency counts); any value may be absent.
struct NormValues {
  std::array<std::optional<double>, 5> values{};

  std::optional<double>& operator[](NormVariable v) { return values[static_cast<std::size_t>(v)]; }
  const std::optional<double>& operator[](NormVariable v) const {
    return values[static_cast<std::size_t>(v)];
  }
  bool any() const;
  friend bool operator==(const NormValues&, const NormValues&) = default;
};

struct NormsTable {
  std::map<std::string, NormValues> rows;
  /// Non-fatal notes produced while loading (duplicate rows).
  std::vector<std::string> warnings;
};

/// CSV with header `word,aoa,concreteness,imageability,freq_written,freq_oral`.
/// Empty cells are missing values; duplicate words keep the last row.
NormsTable load_norms(std::istream& in);

void write_norms(std::ostream& out, const NormsTable& table);

}  // namespace lexgraph
