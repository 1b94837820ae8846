#ifndef PICTOPIPE_METRICS_H_
#define PICTOPIPE_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pictopipe {

using Tokens = std::vector<std::string>;

struct ScoredPair {
  Tokens source;
  Tokens hypothesis;
  std::vector<Tokens> references;
};

// Corpus BLEU on a 0-100 scale: clipped n-gram precisions for n = 1..max_n
// combined geometrically with the brevity penalty (closest reference
// length, shorter on ties). A zero count for n >= 2 is add-one smoothed.
double bleu(std::span<const ScoredPair> corpus, int max_n = 4);

// Corpus GLEU on a 0-100 scale. Per sentence and order, hypothesis n-grams
// matching the reference count as hits and hypothesis n-grams found in the
// source but not covered by the reference are subtracted (floored at zero);
// totals are summed over the corpus and combined like BLEU, with the same
// smoothing.
// With several references the score is averaged over reference positions.
double gleu(std::span<const ScoredPair> corpus, int max_n = 4);

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
  bool exact = false;  // true when p comes from full permutation enumeration
};

// Rank correlation with average ranks for ties. Two-sided p-value from all
// n! permutations when n <= 8, else from Student's t with n - 2 degrees of
// freedom.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

// Average (1-based) ranks, ties sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Tab-separated rows: source, hypothesis, reference[, reference...].
// Sentences are split with the library tokenizer.
std::vector<ScoredPair> load_gec_eval_corpus(std::istream& in);
std::vector<ScoredPair> load_gec_eval_corpus_file(const std::string& path);

}  // namespace pictopipe

#endif  // PICTOPIPE_METRICS_H_
