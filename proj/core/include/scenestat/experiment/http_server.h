#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "scenestat/experiment/store.h"

namespace scenestat::experiment {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds an ephemeral port
  std::optional<std::filesystem::path> static_dir;  // participant UI assets
};

/// JSON-over-HTTP front end of an ExperimentStore:
///   POST /api/sessions                  {set_id, age?, gender?}
///   GET  /api/sessions/{id}             session state, for resuming
///   POST /api/sessions/{id}/responses   {index, choice, rt_ms}
///   GET  /api/sets/{id}/export          CSV pattern_hex,n_random,n_total
///   GET  /api/healthz
/// Errors are {"code", "message"} with status 400, 404 or 409.
class ExperimentServer {
 public:
  ExperimentServer(ExperimentStore& store, ServerOptions options);
  ~ExperimentServer();

  /// Binds the listening socket; returns the bound port. Throws InputError.
  int bind();
  /// Serves until stop() is called. bind() must have succeeded.
  void serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scenestat::experiment
