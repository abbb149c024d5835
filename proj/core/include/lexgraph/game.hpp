#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexgraph/decomposition.hpp"
#include "lexgraph/errors.hpp"
#include "lexgraph/lexicon.hpp"
#include "lexgraph/mgs.hpp"

namespace lexgraph {

struct GameRules {
  std::size_t min_content_words = 2;
  bool ban_self_reference = true;

  /// Throws PreconditionError when min_content_words is 0.
  void validate() const;
  friend bool operator==(const GameRules&, const GameRules&) = default;
};

/// A submission or start word rejected by the game rules. `rules()` lists
/// every rule broken; `rule()` is the first of them.
class RuleViolation : public Error {
 public:
  RuleViolation(std::vector<std::string> rules, const std::string& detail)
      : Error(detail), rules_(std::move(rules)), detail_(detail) {}
  const std::string& rule() const noexcept { return rules_.front(); }
  const std::vector<std::string>& rules() const noexcept { return rules_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::vector<std::string> rules_;
  std::string detail_;
};

enum class SessionStatus { active, complete };
std::string_view status_name(SessionStatus s);

struct GameSession {
  std::string id;
  std::string start_word;
  GameRules rules;
  std::shared_ptr<const StopList> stop;
  std::map<std::string, WordBag> defined;
  /// Words awaiting a definition, in order of first use.
  std::vector<std::string> pending;
  SessionStatus status = SessionStatus::active;

  bool is_pending(const std::string& word) const;
  /// Every word seen so far, defined or pending.
  std::size_t seen() const noexcept { return defined.size() + pending.size(); }
  friend bool operator==(const GameSession& a, const GameSession& b);
};

/// Lowercases and splits the player's tokens on whitespace, trimming
/// punctuation from either end of each piece.
std::vector<std::string> game_tokens(std::span<const std::string> raw);

/// Throws RuleViolation ("empty-start-word", "not-a-word", "stop-word").
GameSession start_session(std::string_view start_word, const GameRules& rules,
                          std::shared_ptr<const StopList> stop, std::string id = {});

/// Any pending word may be defined. Throws RuleViolation with rule
/// "session-complete", "out-of-turn", "self-reference" or
/// "min-content-words".
GameSession submit_definition(const GameSession& s, std::string_view word, std::span<const std::string> tokens);

/// Throws PreconditionError ("not-complete") while the session is active.
Lexicon export_minidict(const GameSession& s);

struct SessionAnalysis {
  FullDecomposition full;
  GroundingSet mgs;
};

/// Decomposition and exact MGS of the exported mini-dictionary.
SessionAnalysis analyze_session(const GameSession& s, const SolverConfig& cfg = {});

std::string session_view_json(const GameSession& s);
std::string analysis_json(const SessionAnalysis& a);

/// Event log lines: one "start" record carrying the rules and stop list,
/// then one "define" record per accepted submission.
std::string start_event(const GameSession& s);
std::string define_event(std::string_view word, std::span<const std::string> tokens);

/// Rebuilds a session from its event log. Throws ParseError on malformed
/// records and InvariantViolation when a logged submission is rejected.
GameSession replay_log(std::istream& log);

/// Thread-safe session registry. With a directory, every session is
/// persisted as `<dir>/<id>.log` and existing logs are replayed on
/// construction.
class SessionStore {
 public:
  explicit SessionStore(std::shared_ptr<const StopList> stop, std::optional<std::filesystem::path> dir = {});
  ~SessionStore();
  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  GameSession create(std::string_view start_word, const GameRules& rules);
  /// Consistent snapshot. Throws NotFoundError.
  GameSession get(const std::string& id) const;
  GameSession submit(const std::string& id, std::string_view word, std::span<const std::string> tokens);
  std::vector<std::string> ids() const;
  /// Logs that could not be replayed at start-up.
  const std::vector<std::string>& load_warnings() const noexcept { return load_warnings_; }
  void flush();

 private:
  struct Slot;
  std::shared_ptr<Slot> slot(const std::string& id) const;
  std::string fresh_id();

  std::shared_ptr<const StopList> stop_;
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::vector<std::string> load_warnings_;
};

}  // namespace lexgraph
