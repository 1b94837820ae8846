#ifndef PICTOPIPE_TPA_H_
#define PICTOPIPE_TPA_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pictopipe/textproc.h"

namespace pictopipe {

enum class MatchMode {
  kLenient,  // delta = 1 iff "was rendered" agrees with the gold flag
  kStrict,   // delta = 1 iff the predicted entry id equals the gold id
};

struct TpaConfig {
  bool delete_pos = true;        // skip DET / ADP / CONJ
  bool delete_stopwords = true;  // skip stopwords
  bool apply_penalty = false;    // subtract one per entity mismatch
  double epsilon = 1e-9;
  MatchMode match_mode = MatchMode::kLenient;
};

// Gold TP label of one word: null (no pictogram), an entry id, or a plain
// should-convert flag.
using GoldTp = std::variant<std::monostate, std::string, bool>;

// Gold arrays hold one element per word token of the sentence (punctuation
// tokens excluded), in order.
struct TpaSample {
  std::string sentence;
  std::vector<GoldTp> gold_tp;
  std::vector<std::string> gold_ne;  // "O" or PERSON / ORG / LOC / MISC
};

struct WordContext {
  std::size_t sample_index = 0;
  const TpaSample* sample = nullptr;
  std::span<const Token> tokens;  // analysed tokens of the sentence
  std::size_t token_index = 0;    // position in `tokens`
  std::size_t word_index = 0;     // position in the gold arrays
};

struct TpPrediction {
  bool converted = false;
  std::string entry_id;  // empty when not converted
};

using TpPredictor = std::function<TpPrediction(const WordContext&)>;
using NePredictor = std::function<std::string(const WordContext&)>;

struct TpaSentenceScore {
  std::size_t sample_index = 0;
  std::size_t counted = 0;
  std::size_t correct = 0;
  std::size_t penalties = 0;
};

struct TpaReport {
  TpaConfig config;
  double score = 0.0;  // ratio * 100
  double ratio = 0.0;  // (correct - penalties) / (N + epsilon)
  std::size_t counted = 0;
  std::size_t correct = 0;
  std::size_t penalties = 0;
  bool no_counted_words = false;
  std::vector<TpaSentenceScore> per_sentence;
};

// Maps "", "NONE" and "O" to "O"; other labels pass through.
std::string normalize_ne_label(std::string_view label);

TpaReport tpa_score(std::span<const TpaSample> corpus,
                    const TpPredictor& predict_tp,
                    const NePredictor& predict_ne, const TpaConfig& cfg,
                    const TagResources& res);

struct TpaCell {
  int case_number = 0;  // 1..4
  bool penalty = false;
  TpaReport report;
};

// Deletion setting of case 1..4: both filters, stopwords only, POS only,
// neither.
TpaConfig case_config(int case_number, bool penalty, double epsilon,
                      MatchMode mode = MatchMode::kLenient);

// Eight cells: cases 1-4 without penalty, then cases 1-4 with penalty.
std::vector<TpaCell> run_case_matrix(std::span<const TpaSample> corpus,
                                     const TpPredictor& predict_tp,
                                     const NePredictor& predict_ne,
                                     double epsilon, const TagResources& res,
                                     MatchMode mode = MatchMode::kLenient);

// JSONL, one {"sentence", "gold_tp", "gold_ne"} object per line.
std::vector<TpaSample> load_tpa_corpus(std::istream& in);
std::vector<TpaSample> load_tpa_corpus_file(const std::string& path);

nlohmann::json report_to_json(const TpaReport& report);
nlohmann::json matrix_to_json(const std::vector<TpaCell>& cells);
std::string format_matrix(const std::vector<TpaCell>& cells);

}  // namespace pictopipe

#endif  // PICTOPIPE_TPA_H_
