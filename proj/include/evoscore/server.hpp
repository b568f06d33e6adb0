#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "evoscore/runs.hpp"

namespace evoscore {

struct ServerConfig {
  std::filesystem::path registry_dir;
  std::filesystem::path data_dir;
  std::string admin_token;  // empty disables the admin track
  std::size_t workers = 4;
  BuildOptions build_defaults;  // admin training defaults
};

// The two-track HTTP service: public batch scoring plus the token-gated
// admin training track.
class ScoringServer {
 public:
  explicit ScoringServer(ServerConfig config);
  ~ScoringServer();

  // Binds to an ephemeral port and serves on a background thread; returns
  // the port. Used by tests and by serve --port 0.
  int start(const std::string& host);

  // Blocking listen (CLI serve path).
  bool listen(const std::string& host, int port);

  void stop();

  RunManager& runs() { return *runs_; }
  BuildManager& builds() { return *builds_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  ServerConfig config_;
  std::unique_ptr<ModelRegistry> registry_;
  std::unique_ptr<RunManager> runs_;
  std::unique_ptr<BuildManager> builds_;
  std::thread serve_thread_;
};

}  // namespace evoscore
