#include "pictopipe/pipeline.h"

#include <map>
#include <nlohmann/json.hpp>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

Lexicon load_configured_lexicon(const PipelineConfig& cfg) {
  cfg.validate();
  return cfg.lexicon_format.empty()
             ? load_lexicon_file(cfg.lexicon_path)
             : load_lexicon_file(cfg.lexicon_path,
                                 parse_lexicon_format(cfg.lexicon_format));
}

PipelineOptions options_from(const PipelineConfig& cfg) {
  PipelineOptions o;
  o.gec.backend = cfg.gec_backend;
  o.gec.endpoint = cfg.gec_endpoint;
  o.gec.timeout = cfg.gec_timeout;
  o.tau = cfg.tau;
  o.session_capacity = cfg.session_capacity;
  return o;
}

class StageTimer {
 public:
  explicit StageTimer(TranslationResult& result) : result_(result) {}

  void lap(const char* stage) {
    auto now = std::chrono::steady_clock::now();
    result_.timing.emplace_back(
        stage, std::chrono::duration_cast<std::chrono::microseconds>(now - last_));
    last_ = now;
  }

 private:
  TranslationResult& result_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

nlohmann::json to_json(const TranslationResult& r) {
  nlohmann::json edits = nlohmann::json::array();
  for (const GecEdit& e : r.edits) {
    edits.push_back({{"begin", e.span.begin},
                     {"end", e.span.end},
                     {"original", e.original},
                     {"replacement", e.replacement},
                     {"category", e.category}});
  }
  nlohmann::json segments = nlohmann::json::array();
  for (const SegmentView& s : r.segments) {
    nlohmann::json j = {{"kind", s.kind}, {"words", s.words}};
    j["entry_id"] = s.entry_id.empty() ? nlohmann::json() : nlohmann::json(s.entry_id);
    j["image_ref"] = s.image_ref.empty() ? nlohmann::json() : nlohmann::json(s.image_ref);
    if (s.similarity) j["similarity"] = *s.similarity;
    if (!s.substitute.empty()) j["substitute"] = s.substitute;
    if (!s.reason.empty()) j["reason"] = s.reason;
    segments.push_back(std::move(j));
  }
  nlohmann::json timing = nlohmann::json::object();
  for (const auto& [stage, us] : r.timing) timing[stage] = us.count();
  return {
      {"input", r.input},
      {"corrected", r.corrected},
      {"edits", edits},
      {"gec_backend", backend_name(r.gec_backend)},
      {"gec_fallback", r.gec_fallback},
      {"segments", segments},
      {"images", r.images},
      {"timing_us", timing},
  };
}

Pipeline::Pipeline(const PipelineConfig& cfg)
    : lexicon_(load_configured_lexicon(cfg)),
      tags_(load_tag_resources({cfg.tag_dictionary_path, cfg.suffix_rules_path,
                                cfg.stopwords_path, cfg.gazetteer_path})),
      gec_rules_(load_gec_rules({cfg.gec_irregular_past_path,
                                 cfg.gec_dictionary_path,
                                 cfg.gec_infinitive_verbs_path,
                                 cfg.gec_bare_nouns_path,
                                 cfg.gec_base_verbs_path})),
      options_(options_from(cfg)) {
  if (!cfg.embeddings_path.empty()) {
    embeddings_ = load_embeddings_file(cfg.embeddings_path);
  }
  if (!cfg.synonyms_path.empty()) {
    synonyms_ = load_synonyms_file(cfg.synonyms_path);
  }
}

Pipeline::Pipeline(Lexicon lexicon, TagResources tags, GecRuleSet gec_rules,
                   std::optional<EmbeddingTable> embeddings,
                   std::optional<SynonymGraph> synonyms,
                   PipelineOptions options)
    : lexicon_(std::move(lexicon)),
      tags_(std::move(tags)),
      gec_rules_(std::move(gec_rules)),
      embeddings_(std::move(embeddings)),
      synonyms_(std::move(synonyms)),
      options_(std::move(options)) {}

NluResources Pipeline::nlu() const {
  NluResources deps;
  deps.lexicon = &lexicon_;
  deps.embeddings = embeddings_ ? &*embeddings_ : nullptr;
  deps.synonyms = synonyms_ ? &*synonyms_ : nullptr;
  deps.tau = options_.tau;
  return deps;
}

TranslationResult Pipeline::process(std::string_view text,
                                    SessionContext& session) const {
  std::string_view input = trim(text);
  if (input.empty()) throw InvalidArgument("empty input");

  TranslationResult result;
  result.input = std::string(input);
  StageTimer timer(result);

  GecResult gec = correct(input, gec_rules_, options_.gec);
  result.corrected = gec.corrected;
  result.edits = std::move(gec.edits);
  result.gec_backend = gec.backend;
  result.gec_fallback = gec.fallback;
  timer.lap("gec");

  std::vector<Token> tokens = analyze(result.corrected, tags_);
  timer.lap("analyze");
  tokens = resolve_pronouns(std::move(tokens), session, lexicon_);
  timer.lap("coreference");
  PictogramSequence seq = map_text(std::move(tokens), lexicon_);
  timer.lap("tp");
  seq = resolve_unknowns(std::move(seq), nlu());
  timer.lap("nlu");
  result.images = render(seq, lexicon_);

  for (const Segment& seg : seq.segments) {
    SegmentView v;
    v.kind = std::string(segment_kind_name(seg.kind));
    v.words = segment_words(seq, seg);
    if (seg.renders()) {
      v.entry_id = std::string(seg.entry_id());
      v.image_ref = lexicon_.find_id(v.entry_id)->image_ref;
    }
    if (const auto* s = std::get_if<Substituted>(&seg.kind)) {
      v.similarity = s->similarity;
      v.substitute = s->substitute;
    }
    if (const auto* d = std::get_if<Dropped>(&seg.kind)) {
      v.reason = std::string(drop_reason_name(d->reason));
    }
    result.segments.push_back(std::move(v));
  }
  timer.lap("render");

  session.observe(seq.source);
  return result;
}

PictogramSequence Pipeline::map_sentence(std::string_view sentence) const {
  return resolve_unknowns(map_text(analyze(sentence, tags_), lexicon_), nlu());
}

std::vector<TpaCell> Pipeline::evaluate_tpa(std::span<const TpaSample> corpus,
                                            double epsilon,
                                            MatchMode mode) const {
  // One mapping per sentence, shared by every word and every matrix cell.
  std::map<std::size_t, std::vector<TpPrediction>> cache;
  auto predictions = [&](const WordContext& ctx) -> const std::vector<TpPrediction>& {
    auto it = cache.find(ctx.sample_index);
    if (it != cache.end()) return it->second;
    PictogramSequence seq = map_sentence(ctx.sample->sentence);
    std::vector<TpPrediction> per_token(seq.source.size());
    for (const Segment& seg : seq.segments) {
      if (!seg.renders()) continue;
      for (std::size_t k = seg.tokens.begin; k < seg.tokens.end; ++k) {
        per_token[k] = {true, std::string(seg.entry_id())};
      }
    }
    return cache.emplace(ctx.sample_index, std::move(per_token)).first->second;
  };
  TpPredictor tp = [&](const WordContext& ctx) {
    return predictions(ctx).at(ctx.token_index);
  };
  NePredictor ne = [](const WordContext& ctx) {
    return entity_label(ctx.tokens[ctx.token_index].ne);
  };
  return run_case_matrix(corpus, tp, ne, epsilon, tags_, mode);
}

}  // namespace pictopipe
