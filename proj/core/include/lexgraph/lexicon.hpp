#pragma once

#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lexgraph {

/// Set of content words making up one definition.
using WordBag = std::set<std::string>;

struct LexiconEntry {
  std::string headword;
  int sense_rank = 1;
  WordBag definition;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Headwords mapped to their first-sense definition. When `closed` is set,
/// every defining word is itself a headword.
struct Lexicon {
  std::map<std::string, LexiconEntry> entries;
  bool closed = false;

  std::size_t size() const noexcept { return entries.size(); }
  bool contains(const std::string& word) const { return entries.count(word) != 0; }
  const WordBag& definition(const std::string& word) const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

/// Function ("stop") words removed from definitions.
class StopList {
 public:
  StopList() = default;
  explicit StopList(std::set<std::string, std::less<>> words) : words_(std::move(words)) {}

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const noexcept { return words_; }

  /// One lowercase word per line; blank lines and `#` comments ignored.
  static StopList parse(std::istream& in);
  /// Built-in English function-word list.
  static const StopList& english();

 private:
  std::set<std::string, std::less<>> words_;
};

enum class DictionaryFormat { jsonl, tsv };

DictionaryFormat parse_format(std::string_view name);

/// Lowercases ASCII letters; other bytes (UTF-8 continuation included) are kept.
std::string to_lower(std::string_view s);

/// Reads a dictionary, keeping only the lowest-ranked (first) sense of each
/// headword. Tokens are lowercased and collapsed into a set. The result is
/// not closed.
///
/// jsonl: {"word": "...", "senses": [{"rank": 1, "tokens": [...]}, ...]}
/// tsv:   headword <TAB> rank <TAB> space-separated tokens
Lexicon parse_dictionary(std::istream& in, DictionaryFormat format);

/// Drops stop words; order and multiplicity of `tokens` are irrelevant.
WordBag normalize_definition(std::span<const std::string> tokens, const StopList& stop);

/// normalize_definition applied to every entry of `lex`.
Lexicon strip_stop_words(const Lexicon& lex, const StopList& stop);

enum class ClosureMode { drop_unknown, error_unknown };

struct DroppedToken {
  std::string entry;
  std::string token;
  friend bool operator==(const DroppedToken&, const DroppedToken&) = default;
};

struct ClosureResult {
  Lexicon lexicon;
  std::vector<DroppedToken> dropped;
  /// Entries whose definition is empty after closure.
  std::vector<std::string> emptied;
};

/// Makes `raw` self-contained. Under drop_unknown, tokens without an entry
/// are removed and reported; under error_unknown the first one throws
/// ClosureError.
ClosureResult close_lexicon(const Lexicon& raw, ClosureMode mode);

/// Serialises in the jsonl dictionary format (one sense per word).
void write_jsonl(std::ostream& out, const Lexicon& lex);

}  // namespace lexgraph
