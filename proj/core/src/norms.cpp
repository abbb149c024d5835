#include "lexgraph/norms.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "lexgraph/errors.hpp"
#include "lexgraph/lexicon.hpp"
#include "text_util.hpp"

namespace lexgraph {

namespace {
constexpr std::array<std::string_view, 5> kColumnNames = {"aoa", "concreteness", "imageability",
                                                          "freq_written", "freq_oral"};
}

std::string_view variable_name(NormVariable v) { return kColumnNames[static_cast<std::size_t>(v)]; }

NormVariable parse_variable(std::string_view name) {
  for (std::size_t i = 0; i < kColumnNames.size(); ++i) {
    if (kColumnNames[i] == name) return static_cast<NormVariable>(i);
  }
  throw PreconditionError("unknown norm variable '" + std::string(name) + "'");
}

bool NormValues::any() const {
  for (const auto& v : values)
    if (v) return true;
  return false;
}

NormsTable load_norms(std::istream& in) {
  NormsTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split(line, ',');
    if (!header_seen) {
      if (cells.size() != 6 || detail::trim(cells[0]) != "word")
        throw ParseError(lineno, "expected header word,aoa,concreteness,imageability,freq_written,freq_oral");
      for (std::size_t i = 0; i < 5; ++i) {
        if (detail::trim(cells[i + 1]) != kColumnNames[i])
          throw ParseError(lineno, "unexpected column '" + std::string(cells[i + 1]) + "'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 6) throw ParseError(lineno, "expected 6 cells, got " + std::to_string(cells.size()));
    auto word = to_lower(detail::trim(cells[0]));
    if (word.empty()) throw ParseError(lineno, "empty word cell");

    NormValues row;
    for (std::size_t i = 0; i < 5; ++i) {
      auto cell = detail::trim(cells[i + 1]);
      if (cell.empty()) continue;
      double value = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value))
        throw ParseError(lineno, "non-numeric " + std::string(kColumnNames[i]) + " value '" + std::string(cell) + "'");
      row.values[i] = value;
    }
    if (table.rows.count(word)) {
      table.warnings.push_back("line " + std::to_string(lineno) + ": duplicate norms row for '" + word +
                               "', keeping the last one");
    }
    table.rows.insert_or_assign(word, row);
  }
  return table;
}

void write_norms(std::ostream& out, const NormsTable& table) {
  out << "word";
  for (auto name : kColumnNames) out << ',' << name;
  out << '\n';
  for (const auto& [word, row] : table.rows) {
    out << word;
    for (const auto& v : row.values) {
      out << ',';
      if (v) out << std::setprecision(10) << *v;
    }
    out << '\n';
  }
}

}  // namespace lexgraph
