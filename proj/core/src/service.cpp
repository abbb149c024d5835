#include "lexgraph/service.hpp"

#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace lexgraph {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send(res, status, json{{"error", message}});
}

void send_violation(httplib::Response& res, int status, const RuleViolation& v) {
  send(res, status, json{{"rule", v.rule()}, {"rules", v.rules()}, {"detail", v.detail()}});
}

GameRules parse_rules(const json& body) {
  GameRules rules;
  if (auto it = body.find("rules"); it != body.end() && !it->is_null()) {
    rules.min_content_words = it->value("min_content_words", rules.min_content_words);
    rules.ban_self_reference = it->value("ban_self_reference", rules.ban_self_reference);
  }
  return rules;
}

}  // namespace

struct GameService::Impl {
  SessionStore& store;
  ServiceConfig cfg;
  httplib::Server server;
  bool bound = false;

  Impl(SessionStore& s, ServiceConfig c) : store(s), cfg(std::move(c)) { routes(); }

  // Runs a handler, mapping library errors onto HTTP statuses.
  template <typename F>
  static void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const RuleViolation& v) {
      send_violation(res, 409, v);
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, std::string("malformed request: ") + e.what());
    } catch (const PreconditionError& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  }

  void routes() {
    // httplib also sets SO_REUSEPORT, which would let a second server share an occupied port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      send(res, 200, json{{"status", "ok"}, {"version", cfg.version}});
    });

    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto body = json::parse(req.body);
        auto rules = parse_rules(body);
        try {
          auto s = store.create(body.at("start_word").get<std::string>(), rules);
          res.status = 201;
          res.set_content(session_view_json(s), kJson);
        } catch (const RuleViolation& v) {
          send_violation(res, 400, v);
        }
      });
    });

    server.Get(R"(/sessions/([0-9a-zA-Z_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { res.set_content(session_view_json(store.get(req.matches[1])), kJson); });
    });

    server.Post(R"(/sessions/([0-9a-zA-Z_-]+)/definitions)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    auto body = json::parse(req.body);
                    auto word = body.at("word").get<std::string>();
                    auto tokens = body.at("tokens").get<std::vector<std::string>>();
                    res.set_content(session_view_json(store.submit(req.matches[1], word, tokens)), kJson);
                  });
                });

    server.Get(R"(/sessions/([0-9a-zA-Z_-]+)/export)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto s = store.get(req.matches[1]);
        if (s.status != SessionStatus::complete) {
          send(res, 409, json{{"rule", "not-complete"}, {"detail", "the session still has pending words"}});
          return;
        }
        std::ostringstream out;
        write_jsonl(out, export_minidict(s));
        res.set_content(out.str(), "application/x-ndjson");
      });
    });

    server.Get(R"(/sessions/([0-9a-zA-Z_-]+)/analysis)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto s = store.get(req.matches[1]);
        if (s.status != SessionStatus::complete) {
          send(res, 409, json{{"rule", "not-complete"}, {"detail", "the session still has pending words"}});
          return;
        }
        res.set_content(analysis_json(analyze_session(s, cfg.solver)), kJson);
      });
    });

    if (cfg.static_dir && std::filesystem::is_directory(*cfg.static_dir))
      server.set_mount_point("/", cfg.static_dir->string());
  }
};

GameService::GameService(SessionStore& store, ServiceConfig cfg) : impl_(std::make_unique<Impl>(store, std::move(cfg))) {}

GameService::~GameService() { stop(); }

int GameService::bind(int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(impl_->cfg.host)
                        : (impl_->server.bind_to_port(impl_->cfg.host, port) ? port : -1);
  if (bound <= 0) throw Error("cannot bind " + impl_->cfg.host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound;
}

void GameService::serve() {
  if (!impl_->bound) throw PreconditionError("serve() before bind()");
  impl_->server.listen_after_bind();
  impl_->store.flush();
}

void GameService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool GameService::running() const { return impl_->server.is_running(); }

}  // namespace lexgraph
