#ifndef PICTOPIPE_PIPELINE_H_
#define PICTOPIPE_PIPELINE_H_

#include <chrono>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pictopipe/config.h"
#include "pictopipe/gec.h"
#include "pictopipe/lexicon.h"
#include "pictopipe/nlu.h"
#include "pictopipe/textproc.h"
#include "pictopipe/tp.h"
#include "pictopipe/tpa.h"

namespace pictopipe {

// Flattened view of one segment for API consumers.
struct SegmentView {
  std::string kind;  // matched / substituted / dropped / unknown
  std::string words;
  std::string entry_id;   // empty unless the segment renders
  std::string image_ref;  // empty unless the segment renders
  std::optional<double> similarity;
  std::string substitute;
  std::string reason;  // drop reason for dropped segments
};

struct TranslationResult {
  std::string input;
  std::string corrected;
  std::vector<GecEdit> edits;
  GecBackend gec_backend = GecBackend::kRules;
  bool gec_fallback = false;
  std::vector<SegmentView> segments;
  std::vector<std::string> images;
  std::vector<std::pair<std::string, std::chrono::microseconds>> timing;
};

nlohmann::json to_json(const TranslationResult& result);

struct PipelineOptions {
  GecConfig gec;
  double tau = 0.4;
  std::size_t session_capacity = 8;
};

// Loaded, immutable resources plus the text -> pictogram flow. Safe to share
// between threads; per-session state lives in the caller's SessionContext.
class Pipeline {
 public:
  // Loads every resource named by the config. Throws DataError.
  explicit Pipeline(const PipelineConfig& cfg);

  Pipeline(Lexicon lexicon, TagResources tags, GecRuleSet gec_rules,
           std::optional<EmbeddingTable> embeddings,
           std::optional<SynonymGraph> synonyms, PipelineOptions options);

  // correct -> analyse -> resolve pronouns -> map -> resolve unknowns ->
  // render, then records the utterance's nouns in `session`. Throws
  // InvalidArgument for blank input.
  TranslationResult process(std::string_view text,
                            SessionContext& session) const;

  // Maps an already-corrected sentence without touching any session.
  PictogramSequence map_sentence(std::string_view sentence) const;

  // Case matrix of the TP stage (no GEC, no session) against gold data.
  std::vector<TpaCell> evaluate_tpa(std::span<const TpaSample> corpus,
                                    double epsilon = 1e-9,
                                    MatchMode mode = MatchMode::kLenient) const;

  SessionContext new_session() const {
    return SessionContext(options_.session_capacity);
  }

  const Lexicon& lexicon() const { return lexicon_; }
  const TagResources& tags() const { return tags_; }
  const GecRuleSet& gec_rules() const { return gec_rules_; }
  const PipelineOptions& options() const { return options_; }

 private:
  NluResources nlu() const;

  Lexicon lexicon_;
  TagResources tags_;
  GecRuleSet gec_rules_;
  std::optional<EmbeddingTable> embeddings_;
  std::optional<SynonymGraph> synonyms_;
  PipelineOptions options_;
};

}  // namespace pictopipe

#endif  // PICTOPIPE_PIPELINE_H_
