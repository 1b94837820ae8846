#ifndef PICTOPIPE_SERVICE_H_
#define PICTOPIPE_SERVICE_H_

#include <chrono>
#include <memory>
#include <string>

#include "pictopipe/pipeline.h"

namespace pictopipe {

struct ServiceOptions {
  std::string pictogram_root;
  std::string static_root;
  bool local_mode = false;
  std::chrono::minutes session_idle{30};
};

// HTTP JSON front end over a Pipeline:
//   POST /api/translate        {"text", "session"?} -> translation + session
//   GET  /api/pictograms/{id}  image bytes, 404 for unknown ids
//   GET  /api/health           {"status": "ok", "lexicon_entries": N}
//   POST /api/eval/tpa         JSONL corpus (inline, or {"path"} in local
//                              mode) -> case matrix
// Requests on one session are serialized; a concurrent request on a busy
// session gets 409 with Retry-After.
class Service {
 public:
  Service(const Pipeline& pipeline, ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Returns the bound port; throws Error on failure. Port 0 picks any free
  // port.
  int bind(const std::string& host, int port);

  // Blocks until stop() is called.
  void listen();
  void stop();
  bool running() const;

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Loads the config's resources, serves until SIGINT/SIGTERM and returns the
// process exit code.
int serve(const PipelineConfig& cfg);

}  // namespace pictopipe

#endif  // PICTOPIPE_SERVICE_H_
