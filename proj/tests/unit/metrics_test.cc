#include "pictopipe/metrics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ngram_oracle.h"
#include "pictopipe/error.h"
#include "stats_oracle.h"
#include "test_support.h"

namespace pictopipe {
namespace {

using testing::chance;
using testing::pick;
using testing::uniform;

Tokens words(const std::string& text) {
  Tokens out;
  std::istringstream in(text);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

ScoredPair pair(const std::string& src, const std::string& hyp,
                std::vector<std::string> refs) {
  ScoredPair p{words(src), words(hyp), {}};
  for (const auto& r : refs) p.references.push_back(words(r));
  return p;
}

std::vector<oracle::Triple> to_oracle(const std::vector<ScoredPair>& corpus) {
  std::vector<oracle::Triple> out;
  for (const auto& p : corpus) out.push_back({p.source, p.hypothesis, p.references});
  return out;
}

// Small vocabulary so that n-gram overlaps are common.
Tokens random_sentence(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  static const std::vector<std::string> vocab = {"i", "love", "to", "play", "the",
                                                 "dog", "a", "ball", "is", "big"};
  Tokens out;
  const std::size_t len = uniform(rng, lo, hi);
  for (std::size_t i = 0; i < len; ++i) out.push_back(pick(rng, vocab));
  return out;
}

// Edits a copy of the base so hypotheses share structure with references.
Tokens perturb(std::mt19937_64& rng, Tokens base) {
  Tokens extra = random_sentence(rng, 1, 2);
  for (int k = 0; k < 2; ++k) {
    if (chance(rng, 0.4) && base.size() > 1) {
      base.erase(base.begin() + static_cast<long>(uniform(rng, 0, base.size() - 1)));
    }
    if (chance(rng, 0.4)) {
      base.insert(base.begin() + static_cast<long>(uniform(rng, 0, base.size())),
                  extra[0]);
    }
  }
  return base;
}

std::vector<ScoredPair> random_corpus(std::mt19937_64& rng, std::size_t max_refs) {
  std::vector<ScoredPair> corpus;
  const std::size_t size = uniform(rng, 1, 6);
  for (std::size_t i = 0; i < size; ++i) {
    ScoredPair p;
    p.source = random_sentence(rng, 2, 12);
    p.hypothesis = perturb(rng, p.source);
    const std::size_t refs = uniform(rng, 1, max_refs);
    for (std::size_t r = 0; r < refs; ++r) p.references.push_back(perturb(rng, p.hypothesis));
    corpus.push_back(std::move(p));
  }
  return corpus;
}

TEST(BleuTest, IdenticalIsHundred) {
  std::vector<ScoredPair> c = {pair("a b c d e", "I love to play soccer", {"I love to play soccer"}),
                               pair("x", "He took my toy !", {"He took my toy !"})};
  EXPECT_EQ(bleu(c), 100.0);
  EXPECT_EQ(gleu(c), 100.0);
}

TEST(BleuTest, DisjointIsZero) {
  std::vector<ScoredPair> c = {pair("a b c", "p q r s", {"w x y z"})};
  EXPECT_EQ(bleu(c), 0.0);
  EXPECT_EQ(gleu(c), 0.0);
}

TEST(BleuTest, HandComputedValue) {
  // 3/4 unigrams, 1/3 bigrams, 0 trigrams and 4-grams smoothed to 1/3 and 1/2.
  std::vector<ScoredPair> c = {pair("s", "the cat sat down", {"the cat is down"})};
  const double want = 100.0 * std::pow(0.75 * (1.0 / 3.0) * (1.0 / 3.0) * (1.0 / 2.0), 0.25);
  EXPECT_NEAR(bleu(c), want, 1e-9);
}

TEST(BleuTest, BrevityPenaltyUsesClosestReference) {
  std::vector<ScoredPair> c = {pair("s", "a b c", {"a b c d e f", "a b c d"})};
  const double want = 100.0 * std::exp(1.0 - 4.0 / 3.0);
  EXPECT_NEAR(bleu(c, 1), want, 1e-9);
}

TEST(GleuTest, RepeatedSourceNgramStillHundredWhenCorrect) {
  std::vector<ScoredPair> c = {pair("the the dog dog", "the dog", {"the dog"})};
  EXPECT_EQ(gleu(c), 100.0);
}

TEST(GleuTest, KeepingSourceErrorsCostsMoreThanBleu) {
  std::vector<ScoredPair> c = {pair("I lovedd play", "I lovedd play", {"I love to play"})};
  EXPECT_LT(gleu(c), bleu(c));
}

TEST(MetricsErrorTest, RejectsMalformedCorpora) {
  std::vector<ScoredPair> empty;
  EXPECT_THROW(bleu(empty), InvalidArgument);
  EXPECT_THROW(gleu(empty), InvalidArgument);
  std::vector<ScoredPair> no_hyp = {pair("a", "", {"a"})};
  EXPECT_THROW(bleu(no_hyp), InvalidArgument);
  std::vector<ScoredPair> no_ref = {pair("a", "a", {})};
  EXPECT_THROW(bleu(no_ref), InvalidArgument);
  std::vector<ScoredPair> no_src = {pair("", "a", {"a"})};
  EXPECT_NO_THROW(bleu(no_src));
  EXPECT_THROW(gleu(no_src), InvalidArgument);
  std::vector<ScoredPair> ok = {pair("a", "a", {"a"})};
  EXPECT_THROW(bleu(ok, 0), InvalidArgument);
}

TEST(MetricsPropertyTest, BleuAndGleuMatchOracle) {
  std::mt19937_64 rng(20);
  for (int round = 0; round < 200; ++round) {
    auto corpus = random_corpus(rng, round % 2 == 0 ? 1 : 3);
    const auto triples = to_oracle(corpus);
    for (int n : {1, 2, 4}) {
      EXPECT_NEAR(bleu(corpus, n), oracle::bleu(triples, n), 1e-6) << "round " << round;
      EXPECT_NEAR(gleu(corpus, n), oracle::gleu(triples, n), 1e-6) << "round " << round;
    }
  }
}

TEST(MetricsPropertyTest, ScoresStayInRangeAndIdentityIsHundred) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    auto corpus = random_corpus(rng, 2);
    const double b = bleu(corpus);
    const double g = gleu(corpus);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 100.0);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 100.0);
    for (auto& p : corpus) p.references = {p.hypothesis};
    EXPECT_EQ(bleu(corpus), 100.0);
    EXPECT_EQ(gleu(corpus), 100.0);
  }
}

TEST(MetricsCorpusTest, LoadsTsv) {
  std::istringstream in("I lovedd BTS\tI love BTS\tI love BTS\tI like BTS\n\nHe taked it\tHe took it\tHe took it\n");
  auto corpus = load_gec_eval_corpus(in);
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus[0].references.size(), 2u);
  EXPECT_EQ(corpus[1].hypothesis, (Tokens{"He", "took", "it"}));
}

TEST(MetricsCorpusTest, ReportsBadRows) {
  std::istringstream two("a\tb\tc\nonly\ttwo\n");
  try {
    load_gec_eval_corpus(two);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  std::istringstream blank("");
  EXPECT_THROW(load_gec_eval_corpus(blank), DataError);
  EXPECT_THROW(load_gec_eval_corpus_file("/nonexistent.tsv"), DataError);
}

TEST(SpearmanTest, AverageRanks) {
  std::vector<double> v = {10, 20, 20, 5};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(SpearmanTest, PerfectMonotoneAssociation) {
  std::vector<double> x = {1, 2, 3, 4, 5, 6};
  std::vector<double> sq, rev;
  for (double v : x) {
    sq.push_back(v * v);
    rev.push_back(-v);
  }
  auto up = spearman(x, sq);
  EXPECT_DOUBLE_EQ(up.rho, 1.0);
  EXPECT_TRUE(up.exact);
  EXPECT_NEAR(up.p_value, 2.0 / 720.0, 1e-12);
  EXPECT_DOUBLE_EQ(spearman(x, rev).rho, -1.0);
}

TEST(SpearmanTest, ExactPValueMatchesOracle) {
  std::vector<double> x = {3.1, 1.2, 5.5, 4.0, 2.2, 6.7};
  std::vector<double> y = {2.0, 1.0, 4.0, 6.0, 3.0, 5.0};
  auto r = spearman(x, y);
  EXPECT_NEAR(r.rho, static_cast<double>(oracle::spearman_rho(x, y)), 1e-12);
  EXPECT_NEAR(r.p_value, oracle::spearman_exact_p(x, y), 1e-12);
}

TEST(SpearmanTest, LargeSampleUsesTDistribution) {
  std::vector<double> x, y;
  for (int i = 0; i < 30; ++i) {
    x.push_back(i);
    y.push_back(i + ((i % 3 == 0) ? 5.0 : 0.0));
  }
  auto r = spearman(x, y);
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.rho, 0.9);
  EXPECT_LT(r.p_value, 1e-6);

  std::mt19937_64 rng(3);
  std::vector<double> noise;
  for (int i = 0; i < 30; ++i) noise.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
  auto weak = spearman(x, noise);
  EXPECT_GE(weak.p_value, 0.0);
  EXPECT_LE(weak.p_value, 1.0);
}

TEST(SpearmanTest, Errors) {
  std::vector<double> a = {1, 2, 3};
  std::vector<double> b = {1, 2};
  std::vector<double> flat = {4, 4, 4};
  EXPECT_THROW(spearman(a, b), InvalidArgument);
  EXPECT_THROW(spearman(b, b), InvalidArgument);
  EXPECT_THROW(spearman(a, flat), InvalidArgument);
}

TEST(SpearmanPropertyTest, SmallSamplesMatchOracleWithTies) {
  std::mt19937_64 rng(8);
  int checked = 0;
  while (checked < 60) {
    const std::size_t n = uniform(rng, 3, 8);
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(static_cast<double>(uniform(rng, 0, 5)));
      y.push_back(static_cast<double>(uniform(rng, 0, 5)));
    }
    auto flat = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [&](double e) { return e == v[0]; });
    };
    if (flat(x) || flat(y)) continue;
    ++checked;
    auto r = spearman(x, y);
    EXPECT_TRUE(r.exact);
    EXPECT_NEAR(r.rho, static_cast<double>(oracle::spearman_rho(x, y)), 1e-12);
    EXPECT_NEAR(r.p_value, oracle::spearman_exact_p(x, y), 1e-12);
  }
}

TEST(SpearmanPropertyTest, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = uniform(rng, 3, 20);
    std::vector<double> x, y, fx, gy;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(std::uniform_real_distribution<double>(0.1, 10)(rng));
      y.push_back(std::uniform_real_distribution<double>(0.1, 10)(rng));
      fx.push_back(std::log(x.back()) * 3 + 1);
      gy.push_back(std::exp(y.back()));
    }
    auto a = spearman(x, y);
    auto b = spearman(fx, gy);
    EXPECT_NEAR(a.rho, b.rho, 1e-12);
    EXPECT_NEAR(a.p_value, b.p_value, 1e-12);
    auto swapped = spearman(y, x);
    EXPECT_NEAR(a.rho, swapped.rho, 1e-12);
  }
}

}  // namespace
}  // namespace pictopipe
