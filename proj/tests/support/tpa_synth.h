// Synthetic gold-annotated TPA corpus with known word annotations and
// fixed predictions, for checking the scorer against the oracle.
#ifndef PICTOPIPE_TESTS_SUPPORT_TPA_SYNTH_H_
#define PICTOPIPE_TESTS_SUPPORT_TPA_SYNTH_H_

#include <random>
#include <string>
#include <vector>

#include "pictopipe/tpa.h"
#include "tpa_oracle.h"

namespace pictopipe::testing {

struct SynthWord {
  std::string surface;
  std::string pos;
  bool stopword;
  std::string entity;  // label the tagger assigns
};

struct SynthPrediction {
  bool converted = false;
  std::string entry_id;
  std::string ne;
};

struct SynthCorpus {
  TagResources tags;
  std::vector<TpaSample> samples;
  std::vector<std::vector<SynthWord>> words;
  std::vector<std::vector<SynthPrediction>> predictions;

  TpPredictor tp_predictor() const {
    return [this](const WordContext& c) {
      const SynthPrediction& p = predictions[c.sample_index][c.word_index];
      return TpPrediction{p.converted, p.converted ? p.entry_id : ""};
    };
  }
  NePredictor ne_predictor() const {
    return [this](const WordContext& c) {
      return predictions[c.sample_index][c.word_index].ne;
    };
  }

  // Word annotations in the oracle's terms for the given mode.
  std::vector<std::vector<oracle::TpaWord>> oracle_view(MatchMode mode) const {
    std::vector<std::vector<oracle::TpaWord>> out;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      std::vector<oracle::TpaWord> sentence;
      for (std::size_t k = 0; k < words[s].size(); ++k) {
        const GoldTp& gold = samples[s].gold_tp[k];
        const SynthPrediction& p = predictions[s][k];
        oracle::TpaWord w;
        w.pos = words[s][k].pos;
        w.stopword = words[s][k].stopword;
        if (mode == MatchMode::kStrict) {
          w.y = std::holds_alternative<std::string>(gold) ? std::get<std::string>(gold) : "";
          w.y_hat = p.converted ? p.entry_id : "";
        } else {
          bool should = std::holds_alternative<std::string>(gold) ||
                        (std::holds_alternative<bool>(gold) && std::get<bool>(gold));
          w.y = should ? "yes" : "no";
          w.y_hat = p.converted ? "yes" : "no";
        }
        w.z = samples[s].gold_ne[k];
        w.z_hat = p.ne;
        sentence.push_back(w);
      }
      out.push_back(sentence);
    }
    return out;
  }
};

inline SynthCorpus make_synth_corpus(std::uint64_t seed, std::size_t sentences,
                                     bool allow_bool_gold) {
  SynthCorpus c;
  c.tags.tag_dictionary = {
      {"the", Pos::kDet},   {"a", Pos::kDet},     {"each", Pos::kDet},
      {"with", Pos::kAdp},  {"onto", Pos::kAdp},  {"and", Pos::kConj},
      {"yet", Pos::kConj},  {"i", Pos::kPron},    {"very", Pos::kAdv},
      {"happy", Pos::kAdj}, {"eat", Pos::kVerb}};
  c.tags.suffix_rules = {{"ing", Pos::kVerb}};
  c.tags.stopwords = {"the", "a", "with", "and", "i", "very"};
  c.tags.gazetteer = {{"seoul", EntityClass::kLoc}, {"bts", EntityClass::kOrg}};
  c.tags.finalize();

  const std::vector<SynthWord> table = {
      {"the", "DET", true, "O"},      {"a", "DET", true, "O"},
      {"each", "DET", false, "O"},    {"with", "ADP", true, "O"},
      {"onto", "ADP", false, "O"},    {"and", "CONJ", true, "O"},
      {"yet", "CONJ", false, "O"},    {"very", "ADV", true, "O"},
      {"happy", "ADJ", false, "O"},   {"eat", "VERB", false, "O"},
      {"running", "VERB", false, "O"}, {"dog", "NOUN", false, "O"},
      {"pizza", "NOUN", false, "O"},  {"seoul", "NOUN", false, "LOC"},
      {"bts", "NOUN", false, "ORG"},  {"Zorblax", "PROPN", false, "MISC"}};
  const std::vector<std::string> ids = {"id_dog", "id_pizza", "id_eat", "id_x"};
  const std::vector<std::string> labels = {"O", "PERSON", "ORG", "LOC", "MISC"};

  std::mt19937_64 rng(seed);
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  auto idx = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  for (std::size_t s = 0; s < sentences; ++s) {
    std::vector<SynthWord> words = {{"i", "PRON", true, "O"}};
    const std::size_t n = 3 + idx(10);
    for (std::size_t k = 0; k < n; ++k) words.push_back(table[idx(table.size())]);

    TpaSample sample;
    std::vector<SynthPrediction> preds;
    for (std::size_t k = 0; k < words.size(); ++k) {
      sample.sentence += (k == 0 ? "" : " ") + words[k].surface;
      if (k > 0 && coin(0.1)) sample.sentence += coin(0.5) ? "," : " !";

      GoldTp gold;
      if (allow_bool_gold && coin(0.3)) {
        gold = coin(0.5);
      } else if (coin(0.6)) {
        gold = ids[idx(ids.size())];
      }
      sample.gold_tp.push_back(gold);
      sample.gold_ne.push_back(coin(0.8) ? words[k].entity : labels[idx(labels.size())]);

      SynthPrediction p;
      p.converted = coin(0.7);
      if (p.converted) {
        p.entry_id = std::holds_alternative<std::string>(gold) && coin(0.7)
                         ? std::get<std::string>(gold)
                         : ids[idx(ids.size())];
      }
      p.ne = coin(0.8) ? words[k].entity : labels[idx(labels.size())];
      preds.push_back(p);
    }
    c.samples.push_back(sample);
    c.words.push_back(words);
    c.predictions.push_back(preds);
  }
  return c;
}

}  // namespace pictopipe::testing

#endif  // PICTOPIPE_TESTS_SUPPORT_TPA_SYNTH_H_
