#include "pictopipe/tpa.h"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"

namespace pictopipe {

namespace {

bool excluded_pos(Pos pos) {
  return pos == Pos::kDet || pos == Pos::kAdp || pos == Pos::kConj;
}

bool tp_delta(const GoldTp& gold, const TpPrediction& pred, MatchMode mode,
              std::size_t sample) {
  if (mode == MatchMode::kStrict) {
    if (std::holds_alternative<bool>(gold)) {
      throw DataError("sample " + std::to_string(sample) +
                      ": strict matching needs entry ids, not booleans");
    }
    const std::string expected =
        std::holds_alternative<std::string>(gold) ? std::get<std::string>(gold)
                                                  : std::string();
    const std::string actual = pred.converted ? pred.entry_id : std::string();
    return expected == actual;
  }
  bool should_convert = false;
  if (const bool* b = std::get_if<bool>(&gold)) {
    should_convert = *b;
  } else {
    should_convert = std::holds_alternative<std::string>(gold);
  }
  return should_convert == pred.converted;
}

}  // namespace

std::string normalize_ne_label(std::string_view label) {
  if (label.empty() || label == "O" || label == "NONE") return "O";
  return std::string(label);
}

TpaReport tpa_score(std::span<const TpaSample> corpus,
                    const TpPredictor& predict_tp,
                    const NePredictor& predict_ne, const TpaConfig& cfg,
                    const TagResources& res) {
  if (corpus.empty()) throw InvalidArgument("TPA corpus is empty");
  if (!(cfg.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");

  TpaReport report;
  report.config = cfg;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const TpaSample& sample = corpus[s];
    const std::vector<Token> tokens = analyze(sample.sentence, res);
    const std::vector<std::size_t> words = word_indices(tokens);
    if (sample.gold_tp.size() != words.size() ||
        sample.gold_ne.size() != words.size()) {
      throw DataError("sample " + std::to_string(s) + ": gold arrays have " +
                      std::to_string(sample.gold_tp.size()) + "/" +
                      std::to_string(sample.gold_ne.size()) +
                      " labels for " + std::to_string(words.size()) +
                      " words");
    }

    TpaSentenceScore line;
    line.sample_index = s;
    for (std::size_t k = 0; k < words.size(); ++k) {
      const Token& w = tokens[words[k]];
      if (cfg.delete_pos && excluded_pos(w.pos)) continue;
      if (cfg.delete_stopwords && w.is_stopword) continue;

      WordContext ctx{s, &sample, tokens, words[k], k};
      if (tp_delta(sample.gold_tp[k], predict_tp(ctx), cfg.match_mode, s)) {
        ++line.correct;
      }
      if (cfg.apply_penalty &&
          normalize_ne_label(predict_ne(ctx)) !=
              normalize_ne_label(sample.gold_ne[k])) {
        ++line.penalties;
      }
      ++line.counted;
    }
    report.counted += line.counted;
    report.correct += line.correct;
    report.penalties += line.penalties;
    report.per_sentence.push_back(line);
  }

  if (report.counted == 0) {
    report.no_counted_words = true;
    return report;
  }
  const double numerator = static_cast<double>(report.correct) -
                           static_cast<double>(report.penalties);
  report.ratio = numerator / (static_cast<double>(report.counted) + cfg.epsilon);
  report.score = 100.0 * report.ratio;
  return report;
}

TpaConfig case_config(int case_number, bool penalty, double epsilon,
                      MatchMode mode) {
  if (case_number < 1 || case_number > 4) {
    throw InvalidArgument("TPA case must be 1-4, got " +
                          std::to_string(case_number));
  }
  TpaConfig cfg;
  cfg.delete_pos = case_number == 1 || case_number == 3;
  cfg.delete_stopwords = case_number == 1 || case_number == 2;
  cfg.apply_penalty = penalty;
  cfg.epsilon = epsilon;
  cfg.match_mode = mode;
  return cfg;
}

std::vector<TpaCell> run_case_matrix(std::span<const TpaSample> corpus,
                                     const TpPredictor& predict_tp,
                                     const NePredictor& predict_ne,
                                     double epsilon, const TagResources& res,
                                     MatchMode mode) {
  std::vector<TpaCell> cells;
  for (bool penalty : {false, true}) {
    for (int c = 1; c <= 4; ++c) {
      cells.push_back({c, penalty,
                       tpa_score(corpus, predict_tp, predict_ne,
                                 case_config(c, penalty, epsilon, mode), res)});
    }
  }
  return cells;
}

std::vector<TpaSample> load_tpa_corpus(std::istream& in) {
  std::vector<TpaSample> corpus;
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(std::string("invalid JSON: ") + e.what(), row);
    }
    if (!j.is_object() || !j.contains("sentence") ||
        !j["sentence"].is_string() || !j.contains("gold_tp") ||
        !j["gold_tp"].is_array() || !j.contains("gold_ne") ||
        !j["gold_ne"].is_array()) {
      throw DataError("expected {sentence, gold_tp[], gold_ne[]}", row);
    }
    TpaSample sample;
    sample.sentence = j["sentence"].get<std::string>();
    for (const auto& g : j["gold_tp"]) {
      if (g.is_null()) {
        sample.gold_tp.emplace_back(std::monostate{});
      } else if (g.is_string()) {
        sample.gold_tp.emplace_back(g.get<std::string>());
      } else if (g.is_boolean()) {
        sample.gold_tp.emplace_back(g.get<bool>());
      } else {
        throw DataError("gold_tp items must be string, null or bool", row);
      }
    }
    for (const auto& z : j["gold_ne"]) {
      if (!z.is_string()) throw DataError("gold_ne items must be strings", row);
      sample.gold_ne.push_back(z.get<std::string>());
    }
    corpus.push_back(std::move(sample));
  }
  return corpus;
}

std::vector<TpaSample> load_tpa_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open TPA corpus '" + path + "'");
  return load_tpa_corpus(in);
}

nlohmann::json report_to_json(const TpaReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : r.per_sentence) {
    per.push_back({{"sample", s.sample_index},
                   {"counted", s.counted},
                   {"correct", s.correct},
                   {"penalties", s.penalties}});
  }
  return {
      {"delete_pos", r.config.delete_pos},
      {"delete_stopwords", r.config.delete_stopwords},
      {"penalty", r.config.apply_penalty},
      {"epsilon", r.config.epsilon},
      {"match_mode", r.config.match_mode == MatchMode::kStrict ? "STRICT"
                                                               : "LENIENT"},
      {"score", r.score},
      {"ratio", r.ratio},
      {"counted", r.counted},
      {"correct", r.correct},
      {"penalties", r.penalties},
      {"no_counted_words", r.no_counted_words},
      {"per_sentence", per},
  };
}

nlohmann::json matrix_to_json(const std::vector<TpaCell>& cells) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json j = report_to_json(c.report);
    j["case"] = c.case_number;
    j["metric"] = c.penalty ? "TPA with penalty" : "TPA";
    out.push_back(std::move(j));
  }
  return out;
}

std::string format_matrix(const std::vector<TpaCell>& cells) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-18s %-5s %-4s %-10s %8s %8s %8s %10s\n",
                "Metric", "Case", "POS", "Stopwords", "Score", "N", "Correct",
                "Penalties");
  out << buf;
  for (const auto& c : cells) {
    const auto& r = c.report;
    std::snprintf(buf, sizeof(buf),
                  "%-18s (%d)   %-4s %-10s %8.2f %8zu %8zu %10zu\n",
                  c.penalty ? "TPA with penalty" : "TPA", c.case_number,
                  r.config.delete_pos ? "yes" : "-",
                  r.config.delete_stopwords ? "yes" : "-", r.score, r.counted,
                  r.correct, r.penalties);
    out << buf;
  }
  return out.str();
}

}  // namespace pictopipe
