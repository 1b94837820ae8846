#include "pictopipe/service.h"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <httplib.h>
#include <iostream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <thread>
#include <unistd.h>
#include <unordered_map>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using nlohmann::json;

struct Session {
  explicit Session(std::size_t capacity) : context(capacity) {}
  std::mutex busy;
  SessionContext context;
  Clock::time_point last_used = Clock::now();
};

std::string content_type_for(const fs::path& path) {
  const std::string ext = to_lower(path.extension().string());
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".gif") return "image/gif";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".webp") return "image/webp";
  return "application/octet-stream";
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

bool is_url(std::string_view ref) {
  return ref.starts_with("http://") || ref.starts_with("https://");
}

}  // namespace

struct Service::Impl {
  Impl(const Pipeline& p, ServiceOptions o)
      : pipeline(p), options(std::move(o)), rng(std::random_device{}()) {}

  const Pipeline& pipeline;
  ServiceOptions options;
  httplib::Server server;

  mutable std::mutex sessions_mu;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions;
  std::mt19937_64 rng;

  std::string new_token() {
    std::ostringstream out;
    out << std::hex << rng() << rng();
    return out.str();
  }

  // Finds the session for `token` (or opens a new one) and drops idle ones.
  std::pair<std::string, std::shared_ptr<Session>> acquire(const std::string& token) {
    std::lock_guard lock(sessions_mu);
    const auto now = Clock::now();
    for (auto it = sessions.begin(); it != sessions.end();) {
      if (it->first != token && now - it->second->last_used > options.session_idle &&
          it->second.use_count() == 1) {
        it = sessions.erase(it);
      } else {
        ++it;
      }
    }
    if (!token.empty()) {
      if (auto it = sessions.find(token); it != sessions.end()) {
        it->second->last_used = now;
        return *it;
      }
    }
    std::string fresh = new_token();
    auto session = std::make_shared<Session>(pipeline.options().session_capacity);
    sessions.emplace(fresh, session);
    return {fresh, session};
  }

  void translate(const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error&) {
      return send_error(res, 400, "request body is not valid JSON");
    }
    if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
      return send_error(res, 400, "expected {\"text\": string}");
    }
    std::string token;
    if (body.contains("session") && !body["session"].is_null()) {
      if (!body["session"].is_string()) {
        return send_error(res, 400, "'session' must be a string");
      }
      token = body["session"].get<std::string>();
    }
    const std::string text = body["text"].get<std::string>();
    if (trim(text).empty()) return send_error(res, 400, "empty input");

    auto [id, session] = acquire(token);
    std::unique_lock busy(session->busy, std::try_to_lock);
    if (!busy.owns_lock()) {
      res.set_header("Retry-After", "1");
      return send_json(res, 409, {{"error", "session busy"}, {"retry", true},
                                  {"session", id}});
    }
    try {
      TranslationResult result = pipeline.process(text, session->context);
      json out = to_json(result);
      out["session"] = id;
      send_json(res, 200, out);
    } catch (const InvalidArgument& e) {
      send_error(res, 400, e.what());
    }
    std::lock_guard lock(sessions_mu);
    session->last_used = Clock::now();
  }

  void pictogram(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const LexiconEntry* entry = pipeline.lexicon().find_id(id);
    if (entry == nullptr) return send_error(res, 404, "unknown pictogram '" + id + "'");
    if (is_url(entry->image_ref)) {
      res.set_redirect(entry->image_ref);
      return;
    }
    fs::path rel(entry->image_ref);
    for (const auto& part : rel) {
      if (part == "..") return send_error(res, 404, "invalid image path");
    }
    fs::path file = rel.is_absolute() ? rel : fs::path(options.pictogram_root) / rel;
    std::ifstream in(file, std::ios::binary);
    if (!in) return send_error(res, 404, "image file missing for '" + id + "'");
    std::ostringstream bytes;
    bytes << in.rdbuf();
    res.status = 200;
    res.set_content(bytes.str(), content_type_for(file));
  }

  void eval_tpa(const httplib::Request& req, httplib::Response& res) {
    std::vector<TpaSample> corpus;
    double epsilon = 1e-9;
    MatchMode mode = MatchMode::kLenient;
    try {
      json body;
      bool is_object = false;
      try {
        body = json::parse(req.body);
        is_object = body.is_object();
      } catch (const json::parse_error&) {
      }
      if (is_object) {
        if (body.contains("epsilon")) epsilon = body["epsilon"].get<double>();
        if (body.value("match_mode", std::string("LENIENT")) == "STRICT") {
          mode = MatchMode::kStrict;
        }
        if (body.contains("path")) {
          if (!options.local_mode) {
            return send_error(res, 403, "corpus paths are only accepted in local mode");
          }
          corpus = load_tpa_corpus_file(body["path"].get<std::string>());
        } else if (body.contains("corpus") && body["corpus"].is_string()) {
          std::istringstream in(body["corpus"].get<std::string>());
          corpus = load_tpa_corpus(in);
        } else {
          // A single-line corpus is itself a JSON object.
          std::istringstream in(req.body);
          corpus = load_tpa_corpus(in);
        }
      } else {
        std::istringstream in(req.body);
        corpus = load_tpa_corpus(in);
      }
      if (corpus.empty()) return send_error(res, 400, "TPA corpus is empty");
      auto cells = pipeline.evaluate_tpa(corpus, epsilon, mode);
      send_json(res, 200, {{"cells", matrix_to_json(cells)},
                           {"table", format_matrix(cells)}});
    } catch (const Error& e) {
      send_error(res, 400, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, e.what());
    }
  }

  void routes() {
    // SO_REUSEADDR only: the library default also sets SO_REUSEPORT, which
    // would let a second instance share a busy port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server.Post("/api/translate", [this](const auto& req, auto& res) { translate(req, res); });
    server.Get(R"(/api/pictograms/(.+))",
               [this](const auto& req, auto& res) { pictogram(req, res); });
    server.Get("/api/health", [this](const auto&, auto& res) {
      send_json(res, 200, {{"status", "ok"},
                           {"lexicon_entries", pipeline.lexicon().size()}});
    });
    server.Post("/api/eval/tpa", [this](const auto& req, auto& res) { eval_tpa(req, res); });
    server.set_exception_handler([](const auto&, auto& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      } catch (...) {
        send_error(res, 500, "internal error");
      }
    });
    if (!options.static_root.empty()) {
      server.set_mount_point("/", options.static_root);
    }
  }
};

Service::Service(const Pipeline& pipeline, ServiceOptions options)
    : impl_(std::make_unique<Impl>(pipeline, std::move(options))) {
  impl_->routes();
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool Service::running() const { return impl_->server.is_running(); }

std::size_t Service::session_count() const {
  std::lock_guard lock(impl_->sessions_mu);
  return impl_->sessions.size();
}

int serve(const PipelineConfig& cfg) {
  std::unique_ptr<Pipeline> pipeline;
  try {
    pipeline = std::make_unique<Pipeline>(cfg);
  } catch (const Error& e) {
    std::cerr << "pictopipe: failed to load resources: " << e.what() << '\n';
    return 1;
  }

  ServiceOptions options;
  options.pictogram_root = cfg.pictogram_root;
  options.static_root = cfg.static_root;
  options.local_mode = cfg.local_mode;
  options.session_idle = cfg.session_idle;
  Service service(*pipeline, options);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  int port = 0;
  try {
    port = service.bind(cfg.host, cfg.port);
  } catch (const Error& e) {
    std::cerr << "pictopipe: " << e.what() << '\n';
    return 1;
  }

  std::atomic<bool> listening_done{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (!listening_done) service.stop();
  });
  std::cerr << "pictopipe: serving " << pipeline->lexicon().size()
            << " pictograms on http://" << cfg.host << ":" << port << '\n';
  service.listen();
  // listen() can also end without a signal; wake the waiter so it can exit.
  listening_done = true;
  if (waiter.joinable()) {
    kill(getpid(), SIGTERM);
    waiter.join();
  }
  return 0;
}

}  // namespace pictopipe
