#include <array>
#include <string_view>

#include "lexgraph/lexicon.hpp"

namespace lexgraph {

namespace {

// Closed-class English words: articles, pronouns, auxiliaries, prepositions,
// conjunctions, negation and a few quantifiers.
constexpr std::array<std::string_view, 150> kEnglishStopWords = {
    "a",        "about",   "above",   "after",   "again",   "against", "all",     "am",
    "an",       "and",     "any",     "are",     "as",      "at",      "be",      "because",
    "been",     "before",  "being",   "below",   "between", "both",    "but",     "by",
    "can",      "could",   "did",     "do",      "does",    "doing",   "down",    "during",
    "each",     "either",  "else",    "etc",     "ever",    "every",   "few",     "for",
    "from",     "further", "had",     "has",     "have",    "having",  "he",      "her",
    "here",     "hers",    "herself", "him",     "himself", "his",     "how",     "i",
    "if",       "in",      "into",    "is",      "it",      "its",     "itself",  "may",
    "me",       "might",   "more",    "most",    "must",    "my",      "myself",  "neither",
    "no",       "nor",     "not",     "of",      "off",     "on",      "once",    "one's",
    "only",     "or",      "other",   "ought",   "our",     "ours",    "ourselves", "out",
    "over",     "own",     "same",    "shall",   "she",     "should",  "so",      "some",
    "someone",  "something", "such",  "than",    "that",    "the",     "their",   "theirs",
    "them",     "themselves", "then", "there",   "these",   "they",    "this",    "those",
    "through",  "thus",    "to",      "too",     "under",   "until",   "up",      "upon",
    "us",       "very",    "was",     "we",      "were",    "what",    "when",    "where",
    "whether",  "which",   "while",   "who",     "whom",    "whose",   "why",     "will",
    "with",     "within",  "without", "would",   "yet",     "you",     "your",    "yours",
    "yourself", "yourselves", "oneself", "one",  "whoever", "whatever"};

}  // namespace

const StopList& StopList::english() {
  static const StopList list = [] {
    std::set<std::string, std::less<>> words;
    for (auto w : kEnglishStopWords) words.emplace(w);
    return StopList(std::move(words));
  }();
  return list;
}

}  // namespace lexgraph
