#include "lexgraph/game.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "text_util.hpp"

namespace lexgraph {

using nlohmann::json;

namespace {

bool is_edge_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string trim_punct(std::string_view s) {
  while (!s.empty() && is_edge_punct(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_edge_punct(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string normalize_word(std::string_view raw) { return to_lower(detail::trim(raw)); }

}  // namespace

void GameRules::validate() const {
  if (min_content_words < 1) throw PreconditionError("min_content_words must be at least 1");
}

std::string_view status_name(SessionStatus s) { return s == SessionStatus::active ? "active" : "complete"; }

bool GameSession::is_pending(const std::string& word) const {
  return std::find(pending.begin(), pending.end(), word) != pending.end();
}

bool operator==(const GameSession& a, const GameSession& b) {
  auto stop_words = [](const GameSession& s) { return s.stop ? s.stop->words() : std::set<std::string, std::less<>>{}; };
  return a.id == b.id && a.start_word == b.start_word && a.rules == b.rules && a.defined == b.defined &&
         a.pending == b.pending && a.status == b.status && stop_words(a) == stop_words(b);
}

std::vector<std::string> game_tokens(std::span<const std::string> raw) {
  std::vector<std::string> out;
  for (const auto& token : raw) {
    for (auto piece : detail::split_whitespace(token)) {
      auto word = trim_punct(to_lower(piece));
      if (!word.empty()) out.push_back(std::move(word));
    }
  }
  return out;
}

GameSession start_session(std::string_view start_word, const GameRules& rules, std::shared_ptr<const StopList> stop,
                          std::string id) {
  rules.validate();
  if (!stop) stop = std::shared_ptr<const StopList>(&StopList::english(), [](const StopList*) {});
  auto word = normalize_word(start_word);
  if (word.empty()) throw RuleViolation({"empty-start-word"}, "the start word is empty");
  if (detail::has_whitespace(word) || !detail::valid_utf8(word))
    throw RuleViolation({"not-a-word"}, "'" + word + "' is not a single word");
  if (stop->contains(word)) throw RuleViolation({"stop-word"}, "'" + word + "' is a function word");

  GameSession s;
  s.id = std::move(id);
  s.start_word = word;
  s.rules = rules;
  s.stop = std::move(stop);
  s.pending.push_back(word);
  return s;
}

GameSession submit_definition(const GameSession& s, std::string_view word_in, std::span<const std::string> tokens) {
  if (s.status == SessionStatus::complete) throw RuleViolation({"session-complete"}, "the session is already complete");
  auto word = normalize_word(word_in);
  if (!s.is_pending(word)) {
    auto detail = s.defined.count(word) ? "'" + word + "' is already defined" : "'" + word + "' is not awaiting a definition";
    throw RuleViolation({"out-of-turn"}, detail);
  }

  auto cleaned = game_tokens(tokens);
  for (const auto& t : cleaned)
    if (!detail::valid_utf8(t)) throw RuleViolation({"invalid-token"}, "definition contains invalid UTF-8");
  auto bag = normalize_definition(cleaned, *s.stop);

  std::vector<std::string> broken;
  std::string detail;
  if (s.rules.ban_self_reference && bag.count(word)) {
    broken.push_back("self-reference");
    detail = "'" + word + "' may not appear in its own definition";
  }
  if (bag.size() < s.rules.min_content_words) {
    broken.push_back("min-content-words");
    if (!detail.empty()) detail += "; ";
    detail += "a definition needs at least " + std::to_string(s.rules.min_content_words) + " content word(s), got " +
              std::to_string(bag.size());
  }
  if (!broken.empty()) throw RuleViolation(std::move(broken), detail);

  GameSession next = s;
  next.pending.erase(std::find(next.pending.begin(), next.pending.end(), word));
  // New words join the queue in the order the player wrote them.
  for (const auto& t : cleaned) {
    if (!bag.count(t) || t == word) continue;
    if (next.defined.count(t) || next.is_pending(t)) continue;
    next.pending.push_back(t);
  }
  next.defined.emplace(word, std::move(bag));
  next.status = next.pending.empty() ? SessionStatus::complete : SessionStatus::active;
  return next;
}

Lexicon export_minidict(const GameSession& s) {
  if (s.status != SessionStatus::complete) throw PreconditionError("not-complete: the session still has pending words");
  Lexicon raw;
  for (const auto& [word, bag] : s.defined) raw.entries.emplace(word, LexiconEntry{word, 1, bag});
  return close_lexicon(raw, ClosureMode::error_unknown).lexicon;
}

SessionAnalysis analyze_session(const GameSession& s, const SolverConfig& cfg) {
  auto full = decompose_full(export_minidict(s));
  auto mgs = solve_mgs(full.graph, cfg);
  full.report.mgs = mgs.size();
  return {std::move(full), std::move(mgs)};
}

namespace {

json view(const GameSession& s) {
  json defined = json::object();
  for (const auto& [word, bag] : s.defined) defined[word] = bag;
  return {{"id", s.id},
          {"start_word", s.start_word},
          {"status", status_name(s.status)},
          {"pending", s.pending},
          {"defined_count", s.defined.size()},
          {"seen_count", s.seen()},
          {"defined", defined},
          {"rules", {{"min_content_words", s.rules.min_content_words}, {"ban_self_reference", s.rules.ban_self_reference}}}};
}

}  // namespace

std::string session_view_json(const GameSession& s) { return view(s).dump(); }

std::string analysis_json(const SessionAnalysis& a) {
  const auto& g = a.full.graph;
  const auto& d = a.full.decomposition;
  json labels = json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    labels[g.name(static_cast<VertexId>(v))] = label_name(d.label[v]);
  json components = json::array();
  for (const auto& c : d.core_components) components.push_back(g.words(c));
  auto st = straddle_report(d, a.mgs);
  return json{{"labels", labels},
              {"report", json::parse(report_json(a.full.report))},
              {"core_components", components},
              {"mgs",
               {{"words", g.words(a.mgs.words)},
                {"optimal", a.mgs.optimal},
                {"lower_bound", a.mgs.lower_bound},
                {"straddle",
                 {{"in_core", st.in_core}, {"in_satellite", st.in_satellite}, {"outside_kernel", st.outside_kernel}}}}}}
      .dump();
}

std::string start_event(const GameSession& s) {
  std::vector<std::string> stop(s.stop->words().begin(), s.stop->words().end());
  return json{{"event", "start"},
              {"id", s.id},
              {"start_word", s.start_word},
              {"rules", {{"min_content_words", s.rules.min_content_words}, {"ban_self_reference", s.rules.ban_self_reference}}},
              {"stop", stop}}
      .dump();
}

std::string define_event(std::string_view word, std::span<const std::string> tokens) {
  return json{{"event", "define"}, {"word", word}, {"tokens", std::vector<std::string>(tokens.begin(), tokens.end())}}
      .dump();
}

GameSession replay_log(std::istream& log) {
  std::optional<GameSession> s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(log, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
      const auto kind = record.at("event").get<std::string>();
      if (kind == "start") {
        if (s) throw ParseError(line_no, "second start record");
        GameRules rules;
        rules.min_content_words = record.at("rules").at("min_content_words").get<std::size_t>();
        rules.ban_self_reference = record.at("rules").at("ban_self_reference").get<bool>();
        std::set<std::string, std::less<>> stop_words;
        for (const auto& w : record.at("stop")) stop_words.insert(w.get<std::string>());
        s = start_session(record.at("start_word").get<std::string>(), rules,
                          std::make_shared<const StopList>(std::move(stop_words)), record.at("id").get<std::string>());
      } else if (kind == "define") {
        if (!s) throw ParseError(line_no, "define record before start");
        auto tokens = record.at("tokens").get<std::vector<std::string>>();
        s = submit_definition(*s, record.at("word").get<std::string>(), tokens);
      } else {
        throw ParseError(line_no, "unknown event '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("bad event record: ") + e.what());
    } catch (const RuleViolation& e) {
      throw InvariantViolation("line " + std::to_string(line_no) + ": logged event rejected on replay: " + e.what());
    }
  }
  if (!s) throw ParseError(0, "event log has no start record");
  return *s;
}

struct SessionStore::Slot {
  std::mutex write;
  mutable std::mutex snapshot_mutex;
  std::shared_ptr<const GameSession> snapshot;
  std::ofstream log;

  std::shared_ptr<const GameSession> current() const {
    std::lock_guard lock(snapshot_mutex);
    return snapshot;
  }
  void publish(GameSession s) {
    auto next = std::make_shared<const GameSession>(std::move(s));
    std::lock_guard lock(snapshot_mutex);
    snapshot = std::move(next);
  }
  void append(const std::string& record) {
    if (!log.is_open()) return;
    log << record << '\n';
    log.flush();
    if (!log) throw Error("failed to append to session log");
  }
};

SessionStore::SessionStore(std::shared_ptr<const StopList> stop, std::optional<std::filesystem::path> dir)
    : stop_(std::move(stop)), dir_(std::move(dir)) {
  if (!stop_) stop_ = std::shared_ptr<const StopList>(&StopList::english(), [](const StopList*) {});
  if (!dir_) return;
  std::filesystem::create_directories(*dir_);
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(*dir_))
    if (entry.is_regular_file() && entry.path().extension() == ".log") logs.push_back(entry.path());
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    try {
      std::ifstream in(path);
      auto s = replay_log(in);
      if (s.id != path.stem().string()) throw ParseError(0, "session id does not match file name");
      auto slot = std::make_shared<Slot>();
      slot->log.open(path, std::ios::app);
      slot->publish(std::move(s));
      slots_.emplace(path.stem().string(), std::move(slot));
    } catch (const std::exception& e) {
      load_warnings_.push_back(path.filename().string() + ": " + e.what());
    }
  }
}

SessionStore::~SessionStore() { flush(); }

std::string SessionStore::fresh_id() {
  static thread_local std::random_device rd;
  static constexpr char kHex[] = "0123456789abcdef";
  for (;;) {
    std::string id;
    for (int i = 0; i < 4; ++i) {
      auto r = rd();
      for (int k = 0; k < 8; ++k, r >>= 4) id += kHex[r & 0xF];
    }
    if (!slots_.count(id)) return id;
  }
}

std::shared_ptr<SessionStore::Slot> SessionStore::slot(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = slots_.find(id);
  if (it == slots_.end()) throw NotFoundError("no session '" + id + "'");
  return it->second;
}

GameSession SessionStore::create(std::string_view start_word, const GameRules& rules) {
  std::unique_lock lock(mutex_);
  auto s = start_session(start_word, rules, stop_, fresh_id());
  auto slot = std::make_shared<Slot>();
  if (dir_) {
    slot->log.open(*dir_ / (s.id + ".log"), std::ios::out | std::ios::trunc);
    if (!slot->log) throw Error("cannot create session log in " + dir_->string());
    slot->append(start_event(s));
  }
  slot->publish(s);
  slots_.emplace(s.id, std::move(slot));
  return s;
}

GameSession SessionStore::get(const std::string& id) const { return *slot(id)->current(); }

GameSession SessionStore::submit(const std::string& id, std::string_view word, std::span<const std::string> tokens) {
  auto sl = slot(id);
  std::lock_guard lock(sl->write);
  auto next = submit_definition(*sl->current(), word, tokens);
  sl->append(define_event(normalize_word(word), tokens));
  sl->publish(next);
  return next;
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : slots_) out.push_back(id);
  return out;
}

void SessionStore::flush() {
  std::shared_lock lock(mutex_);
  for (auto& [id, s] : slots_) {
    std::lock_guard w(s->write);
    if (s->log.is_open()) s->log.flush();
  }
}

}  // namespace lexgraph
