#include "lexgraph/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lexgraph/errors.hpp"
#include "text_util.hpp"

namespace lexgraph {

using nlohmann::json;

const WordBag& Lexicon::definition(const std::string& word) const {
  auto it = entries.find(word);
  if (it == entries.end()) throw PreconditionError("unknown headword '" + word + "'");
  return it->second.definition;
}

bool StopList::contains(std::string_view word) const { return words_.find(word) != words_.end(); }

StopList StopList::parse(std::istream& in) {
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto word = detail::trim(line);
    if (!word.empty()) words.insert(to_lower(word));
  }
  return StopList(std::move(words));
}

DictionaryFormat parse_format(std::string_view name) {
  if (name == "jsonl") return DictionaryFormat::jsonl;
  if (name == "tsv") return DictionaryFormat::tsv;
  throw PreconditionError("unknown dictionary format '" + std::string(name) + "'");
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

struct SenseRecord {
  std::string headword;
  int rank;
  std::vector<std::string> tokens;
};

void check_headword(const std::string& head, std::size_t line) {
  if (head.empty()) throw ParseError(line, "empty headword");
  if (detail::has_whitespace(head)) throw ParseError(line, "multiword headword '" + head + "'");
}

// Tokens carrying internal whitespace are split; empty pieces vanish.
void append_tokens(std::string_view raw, std::vector<std::string>& out) {
  for (auto piece : detail::split_whitespace(raw)) out.push_back(to_lower(piece));
}

std::vector<SenseRecord> parse_jsonl_line(const std::string& line, std::size_t lineno) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object() || !record.contains("word") || !record["word"].is_string())
    throw ParseError(lineno, "record lacks a string \"word\"");
  if (!record.contains("senses") || !record["senses"].is_array())
    throw ParseError(lineno, "record lacks a \"senses\" array");

  std::string head = to_lower(detail::trim(record["word"].get<std::string>()));
  check_headword(head, lineno);

  std::vector<SenseRecord> senses;
  for (const auto& sense : record["senses"]) {
    if (!sense.is_object() || !sense.contains("rank") || !sense["rank"].is_number_integer())
      throw ParseError(lineno, "sense lacks an integer \"rank\"");
    if (!sense.contains("tokens") || !sense["tokens"].is_array())
      throw ParseError(lineno, "sense lacks a \"tokens\" array");
    SenseRecord rec{head, sense["rank"].get<int>(), {}};
    if (rec.rank < 1) throw ParseError(lineno, "sense rank must be positive");
    for (const auto& tok : sense["tokens"]) {
      if (!tok.is_string()) throw ParseError(lineno, "non-string token");
      append_tokens(tok.get<std::string>(), rec.tokens);
    }
    senses.push_back(std::move(rec));
  }
  return senses;
}

SenseRecord parse_tsv_line(const std::string& line, std::size_t lineno) {
  auto first = line.find('\t');
  auto second = first == std::string::npos ? first : line.find('\t', first + 1);
  if (second == std::string::npos) throw ParseError(lineno, "expected 3 tab-separated fields");
  if (line.find('\t', second + 1) != std::string::npos)
    throw ParseError(lineno, "expected 3 tab-separated fields");

  std::string head = to_lower(detail::trim(std::string_view(line).substr(0, first)));
  check_headword(head, lineno);

  auto rank_text = detail::trim(std::string_view(line).substr(first + 1, second - first - 1));
  int rank = 0;
  auto [ptr, ec] = std::from_chars(rank_text.data(), rank_text.data() + rank_text.size(), rank);
  if (ec != std::errc() || ptr != rank_text.data() + rank_text.size() || rank < 1)
    throw ParseError(lineno, "invalid sense rank '" + std::string(rank_text) + "'");

  SenseRecord rec{head, rank, {}};
  append_tokens(std::string_view(line).substr(second + 1), rec.tokens);
  return rec;
}

}  // namespace

Lexicon parse_dictionary(std::istream& in, DictionaryFormat format) {
  Lexicon lex;
  // headword -> (rank, line) of every sense seen, for duplicate detection
  std::map<std::string, std::map<int, std::size_t>> seen;

  auto accept = [&](SenseRecord rec, std::size_t lineno) {
    auto& ranks = seen[rec.headword];
    if (auto dup = ranks.find(rec.rank); dup != ranks.end()) {
      throw DuplicateError("line " + std::to_string(lineno) + ": duplicate headword '" +
                           rec.headword + "' at sense " + std::to_string(rec.rank) +
                           " (first seen on line " + std::to_string(dup->second) + ")");
    }
    ranks.emplace(rec.rank, lineno);
    auto it = lex.entries.find(rec.headword);
    if (it != lex.entries.end() && it->second.sense_rank < rec.rank) return;
    LexiconEntry entry{rec.headword, rec.rank, WordBag(rec.tokens.begin(), rec.tokens.end())};
    lex.entries.insert_or_assign(rec.headword, std::move(entry));
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!detail::valid_utf8(line)) throw ParseError(lineno, "invalid UTF-8");
    if (detail::trim(line).empty()) continue;
    if (format == DictionaryFormat::jsonl) {
      for (auto& rec : parse_jsonl_line(line, lineno)) accept(std::move(rec), lineno);
    } else {
      accept(parse_tsv_line(line, lineno), lineno);
    }
  }
  return lex;
}

WordBag normalize_definition(std::span<const std::string> tokens, const StopList& stop) {
  WordBag bag;
  for (const auto& t : tokens) {
    if (!t.empty() && !stop.contains(t)) bag.insert(t);
  }
  return bag;
}

Lexicon strip_stop_words(const Lexicon& lex, const StopList& stop) {
  Lexicon out;
  out.closed = false;
  for (const auto& [head, entry] : lex.entries) {
    std::vector<std::string> tokens(entry.definition.begin(), entry.definition.end());
    out.entries.emplace(head, LexiconEntry{head, entry.sense_rank, normalize_definition(tokens, stop)});
  }
  return out;
}

ClosureResult close_lexicon(const Lexicon& raw, ClosureMode mode) {
  ClosureResult result;
  result.lexicon.closed = true;
  for (const auto& [head, entry] : raw.entries) {
    LexiconEntry closed_entry{head, entry.sense_rank, {}};
    for (const auto& token : entry.definition) {
      if (raw.contains(token)) {
        closed_entry.definition.insert(token);
      } else if (mode == ClosureMode::error_unknown) {
        throw ClosureError(head, token);
      } else {
        result.dropped.push_back({head, token});
      }
    }
    if (closed_entry.definition.empty()) result.emptied.push_back(head);
    result.lexicon.entries.emplace(head, std::move(closed_entry));
  }
  return result;
}

void write_jsonl(std::ostream& out, const Lexicon& lex) {
  for (const auto& [head, entry] : lex.entries) {
    json record = {{"word", head},
                   {"senses", json::array({{{"rank", entry.sense_rank},
                                            {"tokens", std::vector<std::string>(entry.definition.begin(),
                                                                                entry.definition.end())}}})}};
    out << record.dump() << '\n';
  }
}

}  // namespace lexgraph
