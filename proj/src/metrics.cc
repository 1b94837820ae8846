#include "pictopipe/metrics.h"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "pictopipe/error.h"
#include "pictopipe/strings.h"
#include "pictopipe/textproc.h"

namespace pictopipe {

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts count_ngrams(const Tokens& tokens, int n) {
  NgramCounts counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++counts[Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                    tokens.begin() + static_cast<std::ptrdiff_t>(i + len))];
  }
  return counts;
}

std::size_t count_of(const NgramCounts& counts, const Tokens& gram) {
  auto it = counts.find(gram);
  return it == counts.end() ? 0 : it->second;
}

// Geometric mean of smoothed precisions times brevity penalty, scaled to
// 0-100.
double combine(const std::vector<double>& hits,
               const std::vector<double>& totals, double hyp_len,
               double ref_len) {
  double log_sum = 0.0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    double p;
    if (hits[k] > 0.0) {
      p = hits[k] / totals[k];
    } else if (k == 0) {
      return 0.0;
    } else {
      p = (hits[k] + 1.0) / (totals[k] + 1.0);
    }
    log_sum += std::log(p);
  }
  const double bp = hyp_len >= ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  const double score = 100.0 * bp * std::exp(log_sum / static_cast<double>(hits.size()));
  return std::clamp(score, 0.0, 100.0);
}

void check_corpus(std::span<const ScoredPair> corpus, int max_n) {
  if (corpus.empty()) throw InvalidArgument("metric corpus is empty");
  if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].hypothesis.empty()) {
      throw InvalidArgument("pair " + std::to_string(i) +
                            ": empty hypothesis");
    }
    if (corpus[i].references.empty()) {
      throw InvalidArgument("pair " + std::to_string(i) + ": no reference");
    }
  }
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

double bleu(std::span<const ScoredPair> corpus, int max_n) {
  check_corpus(corpus, max_n);
  std::vector<double> hits(static_cast<std::size_t>(max_n), 0.0);
  std::vector<double> totals(static_cast<std::size_t>(max_n), 0.0);
  double hyp_len = 0.0;
  double ref_len = 0.0;

  for (const ScoredPair& pair : corpus) {
    const double c = static_cast<double>(pair.hypothesis.size());
    hyp_len += c;
    double best = static_cast<double>(pair.references.front().size());
    for (const Tokens& ref : pair.references) {
      const double r = static_cast<double>(ref.size());
      const double d = std::abs(r - c);
      const double best_d = std::abs(best - c);
      if (d < best_d || (d == best_d && r < best)) best = r;
    }
    ref_len += best;

    for (int n = 1; n <= max_n; ++n) {
      const NgramCounts hyp = count_ngrams(pair.hypothesis, n);
      std::vector<NgramCounts> refs;
      for (const Tokens& ref : pair.references) {
        refs.push_back(count_ngrams(ref, n));
      }
      for (const auto& [gram, count] : hyp) {
        std::size_t max_ref = 0;
        for (const auto& rc : refs) max_ref = std::max(max_ref, count_of(rc, gram));
        hits[n - 1] += static_cast<double>(std::min(count, max_ref));
        totals[n - 1] += static_cast<double>(count);
      }
    }
  }
  return combine(hits, totals, hyp_len, ref_len);
}

double gleu(std::span<const ScoredPair> corpus, int max_n) {
  check_corpus(corpus, max_n);
  std::size_t ref_sets = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].source.empty()) {
      throw InvalidArgument("pair " + std::to_string(i) + ": missing source");
    }
    ref_sets = std::max(ref_sets, corpus[i].references.size());
  }

  double total = 0.0;
  for (std::size_t k = 0; k < ref_sets; ++k) {
    std::vector<double> hits(static_cast<std::size_t>(max_n), 0.0);
    std::vector<double> totals(static_cast<std::size_t>(max_n), 0.0);
    double hyp_len = 0.0;
    double ref_len = 0.0;
    for (const ScoredPair& pair : corpus) {
      const Tokens& ref = pair.references[std::min(k, pair.references.size() - 1)];
      hyp_len += static_cast<double>(pair.hypothesis.size());
      ref_len += static_cast<double>(ref.size());
      for (int n = 1; n <= max_n; ++n) {
        const NgramCounts h = count_ngrams(pair.hypothesis, n);
        const NgramCounts r = count_ngrams(ref, n);
        const NgramCounts s = count_ngrams(pair.source, n);
        long long matched = 0;
        long long penalized = 0;
        for (const auto& [gram, count] : h) {
          const std::size_t in_ref = count_of(r, gram);
          const std::size_t in_src = count_of(s, gram);
          const std::size_t src_only = in_src > in_ref ? in_src - in_ref : 0;
          const std::size_t hit = std::min(count, in_ref);
          // Only occurrences the reference does not cover can be penalized.
          matched += static_cast<long long>(hit);
          penalized += static_cast<long long>(std::min(count - hit, src_only));
        }
        hits[n - 1] += static_cast<double>(std::max(matched - penalized, 0LL));
        const long long len = static_cast<long long>(pair.hypothesis.size());
        totals[n - 1] += static_cast<double>(std::max(len + 1 - n, 0LL));
      }
    }
    total += combine(hits, totals, hyp_len, ref_len);
  }
  return total / static_cast<double>(ref_sets);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("spearman inputs differ in length");
  }
  if (x.size() < 3) throw InvalidArgument("spearman needs at least 3 pairs");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v[0]; });
  };
  if (constant(x) || constant(y)) {
    throw InvalidArgument("spearman input is constant");
  }

  const std::vector<double> rx = average_ranks(x);
  std::vector<double> ry = average_ranks(y);
  SpearmanResult result;
  result.rho = pearson(rx, ry);
  const std::size_t n = x.size();

  if (n <= 8) {
    const double observed = std::abs(result.rho);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> shuffled(n);
    std::size_t extreme = 0;
    std::size_t total = 0;
    do {
      for (std::size_t i = 0; i < n; ++i) shuffled[i] = ry[perm[i]];
      if (std::abs(pearson(rx, shuffled)) >= observed - 1e-12) ++extreme;
      ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    result.p_value = static_cast<double>(extreme) / static_cast<double>(total);
    result.exact = true;
    return result;
  }

  const double r2 = result.rho * result.rho;
  if (r2 >= 1.0) {
    result.p_value = 0.0;
    return result;
  }
  const double df = static_cast<double>(n - 2);
  const double t = std::abs(result.rho) * std::sqrt(df / (1.0 - r2));
  boost::math::students_t dist(df);
  result.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)),
                              0.0, 1.0);
  return result;
}

std::vector<ScoredPair> load_gec_eval_corpus(std::istream& in) {
  auto words = [](const std::string& text) {
    Tokens out;
    for (const Token& t : tokenize(text)) out.push_back(t.surface);
    return out;
  };
  std::vector<ScoredPair> corpus;
  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto fields = split(lines[i], '\t');
    if (fields.size() < 3) {
      throw DataError("expected source, hypothesis and reference columns",
                      i + 1);
    }
    ScoredPair pair;
    pair.source = words(fields[0]);
    pair.hypothesis = words(fields[1]);
    for (std::size_t k = 2; k < fields.size(); ++k) {
      pair.references.push_back(words(fields[k]));
    }
    if (pair.hypothesis.empty()) throw DataError("empty hypothesis", i + 1);
    if (pair.source.empty()) throw DataError("empty source", i + 1);
    corpus.push_back(std::move(pair));
  }
  if (corpus.empty()) throw DataError("GEC evaluation corpus is empty");
  return corpus;
}

std::vector<ScoredPair> load_gec_eval_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open GEC corpus '" + path + "'");
  return load_gec_eval_corpus(in);
}

}  // namespace pictopipe
