#include "pictopipe/config.h"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

namespace fs = std::filesystem;

enum class Kind { kPath, kString, kDouble, kInt, kBool, kBackend };

struct Key {
  const char* name;
  Kind kind;
};

constexpr Key kKeys[] = {
    {"lexicon", Kind::kPath},
    {"lexicon_format", Kind::kString},
    {"tag_dictionary", Kind::kPath},
    {"suffix_rules", Kind::kPath},
    {"stopwords", Kind::kPath},
    {"gazetteer", Kind::kPath},
    {"gec_irregular_past", Kind::kPath},
    {"gec_dictionary", Kind::kPath},
    {"gec_infinitive_verbs", Kind::kPath},
    {"gec_bare_nouns", Kind::kPath},
    {"gec_base_verbs", Kind::kPath},
    {"gec_backend", Kind::kBackend},
    {"gec_endpoint", Kind::kString},
    {"gec_timeout_ms", Kind::kInt},
    {"embeddings", Kind::kPath},
    {"synonyms", Kind::kPath},
    {"tau", Kind::kDouble},
    {"session_capacity", Kind::kInt},
    {"session_idle_minutes", Kind::kInt},
    {"host", Kind::kString},
    {"port", Kind::kInt},
    {"pictogram_root", Kind::kPath},
    {"static_root", Kind::kPath},
    {"local_mode", Kind::kBool},
};

const Key* find_key(std::string_view name) {
  for (const Key& k : kKeys) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

long long to_int(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw DataError("config '" + key + "' must be an integer, got '" + value + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw DataError("config '" + key + "' must be a number, got '" + value + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  std::string v = to_lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw DataError("config '" + key + "' must be a boolean, got '" + value + "'");
}

void assign(PipelineConfig& cfg, const std::string& key, const std::string& raw,
            const std::string& base_dir) {
  const Key* k = find_key(key);
  if (k == nullptr) throw DataError("unknown config key '" + key + "'");
  std::string value = raw;
  if (k->kind == Kind::kPath && !value.empty()) {
    fs::path p(value);
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    value = p.lexically_normal().string();
  }

  if (key == "lexicon") cfg.lexicon_path = value;
  else if (key == "lexicon_format") cfg.lexicon_format = value;
  else if (key == "tag_dictionary") cfg.tag_dictionary_path = value;
  else if (key == "suffix_rules") cfg.suffix_rules_path = value;
  else if (key == "stopwords") cfg.stopwords_path = value;
  else if (key == "gazetteer") cfg.gazetteer_path = value;
  else if (key == "gec_irregular_past") cfg.gec_irregular_past_path = value;
  else if (key == "gec_dictionary") cfg.gec_dictionary_path = value;
  else if (key == "gec_infinitive_verbs") cfg.gec_infinitive_verbs_path = value;
  else if (key == "gec_bare_nouns") cfg.gec_bare_nouns_path = value;
  else if (key == "gec_base_verbs") cfg.gec_base_verbs_path = value;
  else if (key == "gec_backend") {
    std::string v = to_lower(value);
    if (v == "rules") cfg.gec_backend = GecBackend::kRules;
    else if (v == "external") cfg.gec_backend = GecBackend::kExternal;
    else throw DataError("config 'gec_backend' must be rules or external");
  }
  else if (key == "gec_endpoint") cfg.gec_endpoint = value;
  else if (key == "gec_timeout_ms") cfg.gec_timeout = std::chrono::milliseconds(to_int(key, value));
  else if (key == "embeddings") cfg.embeddings_path = value;
  else if (key == "synonyms") cfg.synonyms_path = value;
  else if (key == "tau") cfg.tau = to_double(key, value);
  else if (key == "session_capacity") {
    long long v = to_int(key, value);
    if (v <= 0) throw DataError("config 'session_capacity' must be positive");
    cfg.session_capacity = static_cast<std::size_t>(v);
  }
  else if (key == "session_idle_minutes") cfg.session_idle = std::chrono::minutes(to_int(key, value));
  else if (key == "host") cfg.host = value;
  else if (key == "port") cfg.port = static_cast<int>(to_int(key, value));
  else if (key == "pictogram_root") cfg.pictogram_root = value;
  else if (key == "static_root") cfg.static_root = value;
  else if (key == "local_mode") cfg.local_mode = to_bool(key, value);
}

}  // namespace

void PipelineConfig::validate() const {
  auto require = [](const std::string& path, const char* key) {
    if (path.empty()) throw DataError(std::string("config '") + key + "' is not set");
  };
  require(lexicon_path, "lexicon");
  require(tag_dictionary_path, "tag_dictionary");
  require(suffix_rules_path, "suffix_rules");
  require(stopwords_path, "stopwords");
  require(gec_irregular_past_path, "gec_irregular_past");
  require(gec_dictionary_path, "gec_dictionary");
  require(gec_infinitive_verbs_path, "gec_infinitive_verbs");
  require(gec_bare_nouns_path, "gec_bare_nouns");
  require(gec_base_verbs_path, "gec_base_verbs");
  if (!(tau >= 0.0 && tau <= 1.0)) throw DataError("config 'tau' must be in [0, 1]");
  if (port < 0 || port > 65535) throw DataError("config 'port' out of range");
  if (gec_timeout.count() <= 0) throw DataError("config 'gec_timeout_ms' must be positive");
  if (session_idle.count() <= 0) throw DataError("config 'session_idle_minutes' must be positive");
}

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

PipelineConfig parse_config(std::istream& in, const std::string& base_dir,
                            const EnvLookup& env) {
  PipelineConfig cfg;
  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw DataError("expected key = value", i + 1);
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    try {
      assign(cfg, key, value, base_dir);
    } catch (const DataError& e) {
      throw DataError(e.what(), i + 1);
    }
  }
  if (env) {
    for (const Key& k : kKeys) {
      std::string var = "PICTOPIPE_";
      for (const char* c = k.name; *c != '\0'; ++c) {
        var += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
      }
      if (auto v = env(var)) assign(cfg, k.name, *v, fs::current_path().string());
    }
  }
  return cfg;
}

PipelineConfig load_config_file(const std::string& path, const EnvLookup& env) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  auto dir = fs::absolute(fs::path(path)).parent_path().string();
  return parse_config(in, dir, env);
}

}  // namespace pictopipe
