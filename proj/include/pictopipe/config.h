#ifndef PICTOPIPE_CONFIG_H_
#define PICTOPIPE_CONFIG_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "pictopipe/gec.h"

namespace pictopipe {

// Every setting of a pipeline deployment. Paths are absolute after loading.
struct PipelineConfig {
  std::string lexicon_path;
  std::string lexicon_format;  // "jsonl", "tsv" or empty for extension-based

  std::string tag_dictionary_path;
  std::string suffix_rules_path;
  std::string stopwords_path;
  std::string gazetteer_path;

  std::string gec_irregular_past_path;
  std::string gec_dictionary_path;
  std::string gec_infinitive_verbs_path;
  std::string gec_bare_nouns_path;
  std::string gec_base_verbs_path;
  GecBackend gec_backend = GecBackend::kRules;
  std::string gec_endpoint;
  std::chrono::milliseconds gec_timeout{2000};

  std::string embeddings_path;  // optional
  std::string synonyms_path;    // optional
  double tau = 0.4;

  std::size_t session_capacity = 8;
  std::chrono::minutes session_idle{30};

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string pictogram_root;
  std::string static_root;  // optional directory served at "/"
  bool local_mode = false;  // allows /api/eval/tpa to read server-side paths

  // Throws DataError when a value is out of range or a required path is
  // unset.
  void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// The process environment.
std::optional<std::string> process_env(const std::string& name);

// Parses "key = value" lines ('#' starts a comment). Relative paths resolve
// against `base_dir`. After the file, each key may be overridden by an
// environment variable PICTOPIPE_<KEY> (upper case).
PipelineConfig parse_config(std::istream& in, const std::string& base_dir,
                            const EnvLookup& env = process_env);
PipelineConfig load_config_file(const std::string& path,
                                const EnvLookup& env = process_env);

}  // namespace pictopipe

#endif  // PICTOPIPE_CONFIG_H_
