#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "lexgraph/game.hpp"
#include "lexgraph/mgs.hpp"

namespace lexgraph {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  /// Directory with the built game UI, served at "/" when present.
  std::optional<std::filesystem::path> static_dir;
  /// Used for /analysis; minis are small, so a short limit is plenty.
  SolverConfig solver{10.0, 1000, BranchRule::lexicographic};
  std::string version;
};

/// HTTP/JSON front end for a SessionStore.
///
///   GET  /health
///   POST /sessions                      {"start_word", "rules"?}  -> 201
///   GET  /sessions/{id}
///   POST /sessions/{id}/definitions     {"word", "tokens"}        -> 200 | 409
///   GET  /sessions/{id}/export          jsonl mini-dictionary     -> 200 | 409
///   GET  /sessions/{id}/analysis                                  -> 200 | 409
class GameService {
 public:
  GameService(SessionStore& store, ServiceConfig cfg);
  ~GameService();
  GameService(const GameService&) = delete;
  GameService& operator=(const GameService&) = delete;

  /// Binds without serving. Port 0 picks a free port. Returns the bound
  /// port; throws Error on failure.
  int bind(int port);
  /// Serves until stop() is called. Requires bind().
  void serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lexgraph
