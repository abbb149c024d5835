#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lexgraph/game.hpp"
#include "lexgraph/grounding.hpp"
#include "support/oracles.hpp"

using namespace lexgraph;
using json = nlohmann::json;
using Tokens = std::vector<std::string>;
using Script = std::map<std::string, Tokens>;

namespace {

std::shared_ptr<const StopList> stops(std::set<std::string, std::less<>> words) {
  return std::make_shared<const StopList>(std::move(words));
}

const std::shared_ptr<const StopList> kSmallStop = stops({"a", "an", "by", "for", "from", "of", "the", "to", "using", "with"});

/// Plays a scripted session: always defines the first pending word.
GameSession play(const std::string& start, const Script& script, std::shared_ptr<const StopList> stop = kSmallStop,
                 std::string* log = nullptr, GameRules rules = {}) {
  auto s = start_session(start, rules, stop, "scripted");
  std::ostringstream events;
  events << start_event(s) << "\n";
  while (s.status == SessionStatus::active) {
    const auto word = s.pending.front();
    const auto& tokens = script.at(word);
    s = submit_definition(s, word, tokens);
    events << define_event(word, tokens) << "\n";
  }
  if (log) *log = events.str();
  return s;
}

// Start word "walk"; every word except walk, locomotion and means lies on or
// upstream of a definitional cycle. The Core is two separate source SCCs:
// {thing, object, being, exist} and {time, moment, point, event}.
Script walk_script() {
  return {
      {"walk", {"locomotion by means of legs"}},
      {"means", {"action", "use", "purpose"}},
      {"legs", {"limb", "body"}},
      {"locomotion", {"means", "move", "place"}},
      {"move", {"change", "position", "go"}},
      {"place", {"position", "space"}},
      {"limb", {"legs", "part"}},
      {"body", {"part", "whole", "person"}},
      {"action", {"do", "act"}},
      {"use", {"do", "purpose"}},
      {"purpose", {"use", "cause"}},
      {"change", {"make", "different", "thing"}},
      {"position", {"place", "thing"}},
      {"space", {"area", "place"}},
      {"go", {"move", "travel"}},
      {"part", {"whole", "thing"}},
      {"whole", {"part", "thing"}},
      {"person", {"human", "being"}},
      {"do", {"act", "make"}},
      {"act", {"do", "action", "thing"}},
      {"cause", {"make", "happen"}},
      {"make", {"cause", "exist", "thing"}},
      {"different", {"thing", "change"}},
      {"thing", {"object", "being"}},
      {"area", {"space", "region"}},
      {"region", {"area", "place"}},
      {"travel", {"go", "place"}},
      {"human", {"person", "body", "live"}},
      {"being", {"thing", "exist"}},
      {"exist", {"being", "object"}},
      {"object", {"thing", "being"}},
      {"happen", {"event", "time"}},
      {"live", {"exist", "time"}},
      {"event", {"time", "moment"}},
      {"time", {"moment", "event"}},
      {"moment", {"time", "point"}},
      {"point", {"moment", "time"}},
  };
}

}  // namespace

TEST(StartSession, WalkIsPendingAndActive) {
  auto s = start_session("walk", {}, nullptr);
  EXPECT_EQ(s.pending, Tokens{"walk"});
  EXPECT_EQ(s.status, SessionStatus::active);
  EXPECT_TRUE(s.defined.empty());
  EXPECT_EQ(start_session("Walk", {}, nullptr).start_word, "walk");
}

TEST(StartSession, Rejections) {
  auto rule_of = [](std::string_view w) {
    try {
      start_session(w, {}, nullptr);
    } catch (const RuleViolation& e) {
      return e.rule();
    }
    return std::string("accepted");
  };
  EXPECT_EQ(rule_of("the"), "stop-word");
  EXPECT_EQ(rule_of("   "), "empty-start-word");
  EXPECT_EQ(rule_of("two words"), "not-a-word");
  GameRules bad;
  bad.min_content_words = 0;
  EXPECT_THROW(start_session("walk", bad, nullptr), PreconditionError);
}

TEST(SubmitDefinition, StopWordsDroppedAndPendingExtended) {
  auto s = start_session("walk", {}, stops({"to", "using"}));
  s = submit_definition(s, "walk", Tokens{"to", "move", "using", "legs"});
  EXPECT_EQ(s.defined.at("walk"), (WordBag{"legs", "move"}));
  EXPECT_EQ(s.pending, (Tokens{"move", "legs"}));
  EXPECT_EQ(s.status, SessionStatus::active);
}

TEST(SubmitDefinition, SelfReferenceAndTooShortReportedTogether) {
  auto s = start_session("walk", {}, stops({"to", "using"}));
  s = submit_definition(s, "walk", Tokens{"to", "move", "using", "legs"});
  try {
    submit_definition(s, "move", Tokens{"move"});
    FAIL();
  } catch (const RuleViolation& e) {
    EXPECT_EQ(e.rules(), (Tokens{"self-reference", "min-content-words"}));
  }
  // The rejected submission leaves the session untouched.
  EXPECT_EQ(s.pending, (Tokens{"move", "legs"}));
}

TEST(SubmitDefinition, OutOfTurnAndComplete) {
  auto s = start_session("cat", {}, kSmallStop);
  try {
    submit_definition(s, "dog", Tokens{"pet", "animal"});
    FAIL();
  } catch (const RuleViolation& e) {
    EXPECT_EQ(e.rule(), "out-of-turn");
  }
  s = submit_definition(s, "cat", Tokens{"small", "pet"});
  // Any pending word may be defined, not just the head.
  s = submit_definition(s, "pet", Tokens{"small", "cat"});
  s = submit_definition(s, "small", Tokens{"little", "cat"});
  s = submit_definition(s, "little", Tokens{"small", "pet"});
  ASSERT_EQ(s.status, SessionStatus::complete);
  try {
    submit_definition(s, "cat", Tokens{"small", "pet"});
    FAIL();
  } catch (const RuleViolation& e) {
    EXPECT_EQ(e.rule(), "session-complete");
  }
}

TEST(SubmitDefinition, RulesAreConfigurable) {
  GameRules lax;
  lax.min_content_words = 1;
  lax.ban_self_reference = false;
  auto s = start_session("echo", lax, kSmallStop);
  s = submit_definition(s, "echo", Tokens{"echo"});
  EXPECT_EQ(s.status, SessionStatus::complete);
}

TEST(SubmitDefinition, TokensAreCleaned) {
  auto s = start_session("dog", {}, kSmallStop);
  s = submit_definition(s, "DOG", Tokens{"A loyal,", "Pet!"});
  EXPECT_EQ(s.defined.at("dog"), (WordBag{"loyal", "pet"}));
  EXPECT_EQ(s.pending, (Tokens{"loyal", "pet"}));
}

TEST(Closure, ThreeSubmissionsReachComplete) {
  auto s = start_session("cat", {}, kSmallStop);
  s = submit_definition(s, "cat", Tokens{"pet", "animal"});
  EXPECT_EQ(s.pending, (Tokens{"pet", "animal"}));
  s = submit_definition(s, "pet", Tokens{"tame", "animal"});
  EXPECT_EQ(s.pending, (Tokens{"animal", "tame"}));
  s = submit_definition(s, "animal", Tokens{"cat", "pet"});
  EXPECT_EQ(s.pending, (Tokens{"tame"}));
  s = submit_definition(s, "tame", Tokens{"pet", "animal"});
  EXPECT_TRUE(s.pending.empty());
  EXPECT_EQ(s.status, SessionStatus::complete);

  auto lex = export_minidict(s);
  EXPECT_EQ(lex.size(), 4u);
  EXPECT_TRUE(lex.closed);
  EXPECT_NO_THROW(close_lexicon(lex, ClosureMode::error_unknown));
}

TEST(Closure, ActiveSessionCannotExport) {
  auto s = start_session("cat", {}, kSmallStop);
  EXPECT_THROW(export_minidict(s), PreconditionError);
  EXPECT_THROW(analyze_session(s), PreconditionError);
}

TEST(Closure, InvariantsHoldAfterEverySubmission) {
  auto s = start_session("walk", {}, kSmallStop);
  auto script = walk_script();
  while (s.status == SessionStatus::active) {
    const auto word = s.pending.back();  // define from the tail to vary the order
    s = submit_definition(s, word, script.at(word));
    for (const auto& p : s.pending) EXPECT_EQ(s.defined.count(p), 0u);
    for (const auto& [w, bag] : s.defined)
      for (const auto& t : bag) EXPECT_TRUE(s.defined.count(t) || s.is_pending(t)) << t;
    EXPECT_EQ(s.status == SessionStatus::complete, s.pending.empty());
  }
}

TEST(Closure, BotWithFixedVocabularyAlwaysCompletes) {
  const Tokens vocab{"sun", "moon", "star", "sky", "light", "dark", "day", "night", "warm", "cold"};
  std::mt19937_64 rng(10);
  for (int game = 0; game < 100; ++game) {
    auto s = start_session(vocab[rng() % vocab.size()], {}, kSmallStop);
    int steps = 0;
    while (s.status == SessionStatus::active) {
      ASSERT_LT(++steps, 100);
      const auto word = s.pending[rng() % s.pending.size()];
      Tokens tokens;
      while (tokens.size() < 2 + rng() % 3) {
        const auto& w = vocab[rng() % vocab.size()];
        if (w != word && std::find(tokens.begin(), tokens.end(), w) == tokens.end()) tokens.push_back(w);
      }
      s = submit_definition(s, word, tokens);
    }
    EXPECT_LE(s.defined.size(), vocab.size());
    EXPECT_NO_THROW(close_lexicon(export_minidict(s), ClosureMode::error_unknown));
  }
}

TEST(MiniDictionary, WalkSessionExportsThirtySevenEntries) {
  auto s = play("walk", walk_script());
  auto lex = export_minidict(s);
  EXPECT_EQ(lex.size(), 37u);
  EXPECT_NO_THROW(close_lexicon(lex, ClosureMode::error_unknown));
}

TEST(MiniDictionary, WalkKernelExcludesWalkLocomotionMeansOnly) {
  auto a = analyze_session(play("walk", walk_script()));
  const auto& g = a.full.graph;
  ASSERT_EQ(g.vertex_count(), 37u);
  Tokens outside;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (a.full.decomposition.label[v] == Label::outside) outside.push_back(g.name(static_cast<VertexId>(v)));
  EXPECT_EQ(outside, (Tokens{"locomotion", "means", "walk"}));
  EXPECT_EQ(a.full.report.kernel, 34u);
  EXPECT_FALSE(a.full.report.core_is_single_scc);
  EXPECT_EQ(g.words(a.full.decomposition.core),
            (Tokens{"being", "event", "exist", "moment", "object", "point", "thing", "time"}));
  EXPECT_TRUE(a.mgs.optimal);
  EXPECT_TRUE(is_grounding_set(g, a.mgs.words));
  EXPECT_EQ(straddle_report(a.full.decomposition, a.mgs).outside_kernel, 0u);
}

TEST(MiniDictionary, F2ShapedSession) {
  // The definitions of fixture F2, played with one-word definitions allowed.
  Script script{{"e", {"c", "d"}}, {"c", {"d", "a"}}, {"d", {"c", "b"}}, {"a", {"b"}}, {"b", {"a"}}};
  GameRules lax;
  lax.min_content_words = 1;
  auto s = play("e", script, stops({}), nullptr, lax);
  auto a = analyze_session(s);
  const auto& g = a.full.graph;
  EXPECT_EQ(g.words(a.full.decomposition.core), (Tokens{"a", "b"}));
  EXPECT_EQ(g.words(a.full.decomposition.satellites), (Tokens{"c", "d"}));
  EXPECT_EQ(a.mgs.size(), 2u);
}

TEST(MiniDictionary, TwoIndependentCyclesGiveMultiSccCore) {
  Script script{{"start", {"up", "left"}}, {"up", {"down"}}, {"down", {"up"}}, {"left", {"right"}}, {"right", {"left"}}};
  GameRules lax;
  lax.min_content_words = 1;
  auto s = play("start", script, stops({}), nullptr, lax);
  auto a = analyze_session(s);
  EXPECT_FALSE(a.full.report.core_is_single_scc);
  EXPECT_EQ(a.full.decomposition.core_components.size(), 2u);
  auto j = json::parse(analysis_json(a));
  EXPECT_EQ(j["labels"]["start"], "OUTSIDE");
  EXPECT_EQ(j["labels"]["up"], "CORE");
  EXPECT_EQ(j["core_components"].size(), 2u);
  EXPECT_EQ(j["mgs"]["words"].size(), 2u);
  EXPECT_EQ(j["mgs"]["straddle"]["outside_kernel"], 0);
}

TEST(EventLog, ReplayReproducesFinalState) {
  std::string log;
  auto s = play("walk", walk_script(), kSmallStop, &log);
  std::istringstream in(log);
  auto replayed = replay_log(in);
  EXPECT_EQ(replayed, s);
  EXPECT_EQ(session_view_json(replayed), session_view_json(s));
}

TEST(EventLog, ReplayOfPartialLogMatchesPartialSession) {
  auto s = start_session("cat", {}, kSmallStop, "p1");
  std::string log = start_event(s) + "\n";
  s = submit_definition(s, "cat", Tokens{"pet", "animal"});
  log += define_event("cat", Tokens{"pet", "animal"}) + "\n";
  std::istringstream in(log);
  EXPECT_EQ(replay_log(in), s);
}

TEST(EventLog, MalformedLogs) {
  std::istringstream empty("");
  EXPECT_THROW(replay_log(empty), ParseError);
  std::istringstream garbage("{not json\n");
  EXPECT_THROW(replay_log(garbage), ParseError);
  auto s = start_session("cat", {}, kSmallStop, "x");
  std::istringstream twice(start_event(s) + "\n" + start_event(s) + "\n");
  EXPECT_THROW(replay_log(twice), ParseError);
  std::istringstream rejected(start_event(s) + "\n" + define_event("cat", Tokens{"cat"}) + "\n");
  EXPECT_THROW(replay_log(rejected), InvariantViolation);
}

TEST(SessionView, Json) {
  auto s = start_session("walk", {}, stops({"to", "using"}), "abc");
  s = submit_definition(s, "walk", Tokens{"to", "move", "using", "legs"});
  auto j = json::parse(session_view_json(s));
  EXPECT_EQ(j["id"], "abc");
  EXPECT_EQ(j["status"], "active");
  EXPECT_EQ(j["pending"], (json{"move", "legs"}));
  EXPECT_EQ(j["defined_count"], 1);
  EXPECT_EQ(j["seen_count"], 3);
  EXPECT_EQ(j["rules"]["min_content_words"], 2);
}

class SessionStoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("lexgraph_store_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
  }
  void TearDown() override { std::filesystem::remove_all(dir); }
  std::filesystem::path dir;
};

TEST_F(SessionStoreTest, InMemoryCreateGetSubmit) {
  SessionStore store(kSmallStop);
  auto s = store.create("cat", {});
  EXPECT_EQ(s.id.size(), 32u);
  EXPECT_EQ(store.get(s.id), s);
  auto next = store.submit(s.id, "cat", Tokens{"pet", "animal"});
  EXPECT_EQ(store.get(s.id).pending, (Tokens{"pet", "animal"}));
  EXPECT_EQ(next, store.get(s.id));
  EXPECT_THROW(store.get("nope"), NotFoundError);
  EXPECT_THROW(store.submit(s.id, "cat", Tokens{"x", "y"}), RuleViolation);
  EXPECT_NE(store.create("dog", {}).id, s.id);
  EXPECT_EQ(store.ids().size(), 2u);
}

TEST_F(SessionStoreTest, RecoversSessionsFromLogs) {
  std::string id;
  GameSession before;
  {
    SessionStore store(kSmallStop, dir);
    id = store.create("cat", {}).id;
    store.submit(id, "cat", Tokens{"pet", "animal"});
    before = store.submit(id, "pet", Tokens{"tame", "animal"});
  }
  SessionStore again(nullptr, dir);
  EXPECT_TRUE(again.load_warnings().empty());
  EXPECT_EQ(again.get(id), before);
  again.submit(id, "animal", Tokens{"cat", "pet"});
  auto done = again.submit(id, "tame", Tokens{"pet", "animal"});
  EXPECT_EQ(done.status, SessionStatus::complete);
}

TEST_F(SessionStoreTest, CorruptLogReportedNotFatal) {
  std::ofstream(dir / "deadbeef.log") << "{broken\n";
  SessionStore store(kSmallStop, dir);
  EXPECT_EQ(store.load_warnings().size(), 1u);
  EXPECT_TRUE(store.ids().empty());
}

TEST_F(SessionStoreTest, ConcurrentWritersOnSeparateSessionsAndReaders) {
  SessionStore store(kSmallStop, dir);
  const Tokens vocab{"sun", "moon", "star", "sky", "light", "dark"};
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(store.create(vocab[i], {}).id);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      std::mt19937_64 rng(t);
      for (;;) {
        auto s = store.get(ids[t]);
        if (s.status == SessionStatus::complete) break;
        const auto word = s.pending.front();
        Tokens tokens;
        for (const auto& w : vocab)
          if (w != word && tokens.size() < 2 + rng() % 2) tokens.push_back(w);
        store.submit(ids[t], word, tokens);
      }
    });
  }
  // Readers hammering one session see consistent snapshots.
  threads.emplace_back([&] {
    for (int i = 0; i < 200; ++i) {
      auto s = store.get(ids[0]);
      EXPECT_EQ(s.status == SessionStatus::complete, s.pending.empty());
    }
  });
  for (auto& th : threads) th.join();
  store.flush();
  SessionStore again(kSmallStop, dir);
  for (const auto& id : ids) EXPECT_EQ(again.get(id), store.get(id));
}

TEST_F(SessionStoreTest, SameSessionWritersAreSerialized) {
  SessionStore store(kSmallStop, dir);
  auto id = store.create("cat", {}).id;
  store.submit(id, "cat", Tokens{"pet", "animal", "small", "furry"});
  // Two threads race to define the same words; every word is accepted once.
  std::atomic<int> accepted{0}, rejected{0};
  auto worker = [&] {
    for (const auto& w : Tokens{"pet", "animal", "small", "furry"}) {
      try {
        store.submit(id, w, Tokens{"cat", w == "pet" ? "animal" : "pet"});
        ++accepted;
      } catch (const RuleViolation&) {
        ++rejected;
      }
    }
  };
  std::thread a(worker), b(worker);
  a.join();
  b.join();
  EXPECT_EQ(accepted.load(), 4);
  EXPECT_EQ(rejected.load(), 4);
  store.flush();
  SessionStore again(kSmallStop, dir);
  EXPECT_EQ(again.get(id), store.get(id));
  EXPECT_EQ(again.get(id).status, SessionStatus::complete);
}
