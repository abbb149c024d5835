#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "lexgraph/lexicon.hpp"
#include "lexgraph/service.hpp"

using namespace lexgraph;
using json = nlohmann::json;

namespace {

std::shared_ptr<const StopList> small_stop() {
  return std::make_shared<const StopList>(std::set<std::string, std::less<>>{"a", "the", "to", "of"});
}

/// A service on a free port, served from a background thread.
class Running {
 public:
  Running(SessionStore& store, ServiceConfig cfg = {}) : service_(store, std::move(cfg)) {
    port_ = service_.bind(0);
    thread_ = std::thread([this] { service_.serve(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(10, 0);
    for (int i = 0; i < 200 && !service_.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~Running() {
    service_.stop();
    thread_.join();
  }
  httplib::Client& client() { return *client_; }

  httplib::Result post(const std::string& path, const json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

 private:
  GameService service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

std::string define_path(const std::string& id) { return "/sessions/" + id + "/definitions"; }

}  // namespace

TEST(Service, HealthReportsVersion) {
  SessionStore store(small_stop());
  ServiceConfig cfg;
  cfg.version = "9.9.9";
  Running svc(store, cfg);
  auto r = svc.client().Get("/health");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  auto j = json::parse(r->body);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["version"], "9.9.9");
}

TEST(Service, FullSessionOverHttp) {
  SessionStore store(small_stop());
  Running svc(store);

  auto created = svc.post("/sessions", {{"start_word", "Cat"}});
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201);
  auto view = json::parse(created->body);
  const std::string id = view["id"];
  EXPECT_EQ(view["pending"], (json{"cat"}));
  EXPECT_EQ(view["status"], "active");

  auto r = svc.post(define_path(id), {{"word", "cat"}, {"tokens", {"a", "pet", "animal"}}});
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body)["pending"], (json{"pet", "animal"}));

  auto early = svc.client().Get("/sessions/" + id + "/export");
  EXPECT_EQ(early->status, 409);
  EXPECT_EQ(json::parse(early->body)["rule"], "not-complete");
  EXPECT_EQ(svc.client().Get("/sessions/" + id + "/analysis")->status, 409);

  auto bad = svc.post(define_path(id), {{"word", "pet"}, {"tokens", {"pet"}}});
  ASSERT_EQ(bad->status, 409);
  auto violation = json::parse(bad->body);
  EXPECT_EQ(violation["rule"], "self-reference");
  EXPECT_EQ(violation["rules"], (json{"self-reference", "min-content-words"}));
  EXPECT_FALSE(violation["detail"].get<std::string>().empty());

  ASSERT_EQ(svc.post(define_path(id), {{"word", "pet"}, {"tokens", {"tame", "animal"}}})->status, 200);
  ASSERT_EQ(svc.post(define_path(id), {{"word", "animal"}, {"tokens", {"cat", "pet"}}})->status, 200);
  auto last = svc.post(define_path(id), {{"word", "tame"}, {"tokens", {"pet", "animal"}}});
  ASSERT_EQ(last->status, 200);
  EXPECT_EQ(json::parse(last->body)["status"], "complete");

  auto got = svc.client().Get("/sessions/" + id);
  ASSERT_EQ(got->status, 200);
  EXPECT_EQ(json::parse(got->body)["defined_count"], 4);

  auto exported = svc.client().Get("/sessions/" + id + "/export");
  ASSERT_EQ(exported->status, 200);
  std::istringstream jsonl(exported->body);
  auto lex = parse_dictionary(jsonl, DictionaryFormat::jsonl);
  EXPECT_EQ(lex.size(), 4u);
  EXPECT_NO_THROW(close_lexicon(lex, ClosureMode::error_unknown));

  auto analysis = svc.client().Get("/sessions/" + id + "/analysis");
  ASSERT_EQ(analysis->status, 200);
  auto a = json::parse(analysis->body);
  EXPECT_EQ(a["labels"].size(), 4u);
  EXPECT_EQ(a["report"]["D"]["count"], 4);
  EXPECT_TRUE(a["mgs"]["optimal"].get<bool>());
}

TEST(Service, ErrorsMapToStatusCodes) {
  SessionStore store(small_stop());
  Running svc(store);
  EXPECT_EQ(svc.client().Get("/sessions/unknown")->status, 404);
  EXPECT_EQ(svc.post(define_path("unknown"), {{"word", "x"}, {"tokens", {"y", "z"}}})->status, 404);
  auto stop_word = svc.post("/sessions", {{"start_word", "the"}});
  EXPECT_EQ(stop_word->status, 400);
  EXPECT_EQ(json::parse(stop_word->body)["rule"], "stop-word");
  EXPECT_EQ(svc.client().Post("/sessions", "{not json", "application/json")->status, 400);
  EXPECT_EQ(svc.post("/sessions", {{"start_word", 7}})->status, 400);
  EXPECT_EQ(svc.post("/sessions", {{"start_word", "dog"}, {"rules", {{"min_content_words", 0}}}})->status, 400);

  auto id = json::parse(svc.post("/sessions", {{"start_word", "dog"}})->body)["id"].get<std::string>();
  auto out_of_turn = svc.post(define_path(id), {{"word", "cat"}, {"tokens", {"pet", "animal"}}});
  EXPECT_EQ(out_of_turn->status, 409);
  EXPECT_EQ(json::parse(out_of_turn->body)["rule"], "out-of-turn");
}

TEST(Service, CustomRulesAccepted) {
  SessionStore store(small_stop());
  Running svc(store);
  auto r = svc.post("/sessions", {{"start_word", "echo"}, {"rules", {{"min_content_words", 1}, {"ban_self_reference", false}}}});
  ASSERT_EQ(r->status, 201);
  auto id = json::parse(r->body)["id"].get<std::string>();
  auto done = svc.post(define_path(id), {{"word", "echo"}, {"tokens", {"echo"}}});
  ASSERT_EQ(done->status, 200);
  EXPECT_EQ(json::parse(done->body)["status"], "complete");
}

TEST(Service, RestartRecoversSessionFromLog) {
  auto dir = std::filesystem::temp_directory_path() / "lexgraph_service_restart";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::string id;
  json before;
  {
    SessionStore store(small_stop(), dir);
    Running svc(store);
    id = json::parse(svc.post("/sessions", {{"start_word", "cat"}})->body)["id"].get<std::string>();
    before = json::parse(svc.post(define_path(id), {{"word", "cat"}, {"tokens", {"pet", "animal"}}})->body);
  }
  {
    SessionStore store(small_stop(), dir);
    Running svc(store);
    auto r = svc.client().Get("/sessions/" + id);
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(json::parse(r->body), before);
  }
  std::filesystem::remove_all(dir);
}

TEST(Service, ServesStaticFiles) {
  auto dir = std::filesystem::temp_directory_path() / "lexgraph_service_static";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<html>game</html>";
  SessionStore store(small_stop());
  ServiceConfig cfg;
  cfg.static_dir = dir;
  Running svc(store, cfg);
  auto r = svc.client().Get("/index.html");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->body, "<html>game</html>");
  std::filesystem::remove_all(dir);
}

TEST(Service, BindFailureThrows) {
  SessionStore store(small_stop());
  GameService first(store, {});
  const int port = first.bind(0);
  GameService second(store, {});
  EXPECT_THROW(second.bind(port), Error);
}
