#include "pictopipe/textproc.h"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "match_oracle.h"
#include "pictopipe/error.h"
#include "pictopipe/strings.h"
#include "test_support.h"

namespace pictopipe {
namespace {

using testing::pick;
using testing::uniform;

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) out.push_back(t.surface);
  return out;
}

TagResources small_resources() {
  TagResources res;
  res.tag_dictionary = {{"the", Pos::kDet},  {"a", Pos::kDet},
                        {"with", Pos::kAdp}, {"and", Pos::kConj},
                        {"i", Pos::kPron},   {"love", Pos::kVerb},
                        {"is", Pos::kVerb},  {"went", Pos::kVerb},
                        {"to", Pos::kAdp}};
  res.suffix_rules = {{"ing", Pos::kVerb}, {"ly", Pos::kAdv}};
  res.stopwords = {"the", "a", "with", "and", "i", "is", "to"};
  res.gazetteer = {{"bts", EntityClass::kOrg},
                   {"new york", EntityClass::kLoc},
                   {"york", EntityClass::kOrg}};
  res.finalize();
  return res;
}

const TagResources& bundled() {
  static const TagResources res = load_tag_resources(
      {testing::data_path("tags/tag_dictionary.tsv"),
       testing::data_path("tags/suffix_rules.tsv"),
       testing::data_path("tags/stopwords.txt"),
       testing::data_path("tags/gazetteer.tsv")});
  return res;
}

TEST(TokenizeTest, SplitsOnWhitespace) {
  EXPECT_EQ(surfaces(tokenize("I love BTS")),
            (std::vector<std::string>{"I", "love", "BTS"}));
}

TEST(TokenizeTest, PeelsTrailingPunctuation) {
  auto tokens = tokenize("He taked my toy!");
  EXPECT_EQ(surfaces(tokens),
            (std::vector<std::string>{"He", "taked", "my", "toy", "!"}));
  EXPECT_TRUE(tokens.back().is_punct());
  EXPECT_EQ(tokens.back().span, (Span{15, 16}));
  EXPECT_EQ(tokens[1].normalized, "taked");
  EXPECT_EQ(tokens[0].normalized, "he");
}

TEST(TokenizeTest, KeepsContractionsAndInnerPunctuation) {
  EXPECT_EQ(surfaces(tokenize("\"Don't stop,\" she said...")),
            (std::vector<std::string>{"\"", "Don't", "stop", ",", "\"", "she",
                                      "said", ".", ".", "."}));
  EXPECT_EQ(surfaces(tokenize("a t-shirt")),
            (std::vector<std::string>{"a", "t-shirt"}));
}

TEST(TokenizeTest, EmptyInput) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" \t\n ").empty());
}

// Surfaces sit at their spans, spans increase, and the text between spans
// is whitespace only: the token stream reconstructs the sentence.
TEST(TokenizePropertyTest, SpansReconstructInput) {
  std::mt19937_64 rng(11);
  const std::string printable =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
      "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
  for (int round = 0; round < 200; ++round) {
    std::string sentence;
    const std::size_t n = uniform(rng, 0, 60);
    for (std::size_t k = 0; k < n; ++k) {
      sentence += testing::chance(rng, 0.2) ? ' ' : printable[uniform(rng, 0, printable.size() - 1)];
    }
    auto tokens = tokenize(sentence);
    std::string rebuilt;
    std::size_t cursor = 0;
    for (const Token& t : tokens) {
      ASSERT_GE(t.span.begin, cursor);
      ASSERT_LT(t.span.begin, t.span.end);
      for (std::size_t k = cursor; k < t.span.begin; ++k) {
        ASSERT_EQ(sentence[k], ' ') << sentence;
      }
      rebuilt += sentence.substr(cursor, t.span.begin - cursor);
      EXPECT_EQ(sentence.substr(t.span.begin, t.span.end - t.span.begin), t.surface);
      rebuilt += t.surface;
      cursor = t.span.end;
      EXPECT_EQ(t.normalized.empty(),
                t.surface.size() == 1 && is_ascii_punct(t.surface[0]));
    }
    for (std::size_t k = cursor; k < sentence.size(); ++k) {
      ASSERT_EQ(sentence[k], ' ');
    }
    rebuilt += sentence.substr(cursor);
    EXPECT_EQ(rebuilt, sentence);
  }
}

TEST(PosTagTest, ClosedClassFromDictionary) {
  auto tokens = analyze("the dog with a cat and me", bundled());
  EXPECT_EQ(tokens[0].pos, Pos::kDet);
  EXPECT_EQ(tokens[2].pos, Pos::kAdp);
  EXPECT_EQ(tokens[5].pos, Pos::kConj);
  EXPECT_EQ(tokens[6].pos, Pos::kPron);
}

TEST(PosTagTest, SuffixRulesAndDefaults) {
  auto tokens = analyze("dancing quickly king zzz", bundled());
  EXPECT_EQ(tokens[0].pos, Pos::kVerb);
  EXPECT_EQ(tokens[1].pos, Pos::kAdv);
  EXPECT_EQ(tokens[2].pos, Pos::kNoun);  // too short for "-ing"
  EXPECT_EQ(tokens[3].pos, Pos::kNoun);
}

TEST(PosTagTest, CapitalizedUnknownWords) {
  auto tokens = analyze("Pizza for Zorblax , 42 times", bundled());
  EXPECT_EQ(tokens[0].pos, Pos::kNoun);  // sentence initial
  EXPECT_EQ(tokens[2].pos, Pos::kPropn);
  EXPECT_EQ(tokens[3].pos, Pos::kOther);
  EXPECT_EQ(tokens[4].pos, Pos::kNum);

  tokens = analyze("I love BTS", bundled());
  EXPECT_EQ(tokens[0].pos, Pos::kPron);
  EXPECT_EQ(tokens[2].pos, Pos::kPropn);

  // Leading punctuation does not make the first word non-initial.
  tokens = analyze("\"Zorblax\" said", bundled());
  EXPECT_EQ(tokens[1].pos, Pos::kNoun);
}

TEST(StopwordTest, Membership) {
  auto tokens = analyze("the my is pizza", bundled());
  EXPECT_TRUE(tokens[0].is_stopword);
  EXPECT_TRUE(tokens[1].is_stopword);
  EXPECT_TRUE(tokens[2].is_stopword);
  EXPECT_FALSE(tokens[3].is_stopword);
}

TEST(StopwordTest, EveryBundledStopwordIsFlagged) {
  std::ifstream in(testing::data_path("tags/stopwords.txt"));
  std::size_t checked = 0;
  for (const std::string& line : read_lines(in)) {
    if (line.empty() || line[0] == '#') continue;
    auto tokens = analyze(line, bundled());
    ASSERT_EQ(tokens.size(), 1u) << line;
    EXPECT_TRUE(tokens[0].is_stopword) << line;
    ++checked;
  }
  EXPECT_EQ(checked, 179u);
}

TEST(EntityTest, GazetteerClass) {
  auto tokens = analyze("I love BTS", small_resources());
  EXPECT_EQ(tokens[2].ne, EntityClass::kOrg);
  EXPECT_FALSE(tokens[0].ne);
  EXPECT_EQ(entity_label(tokens[0].ne), "O");
}

TEST(EntityTest, LongestPhraseBeatsUnigram) {
  auto tokens = analyze("I went to New York", small_resources());
  EXPECT_EQ(tokens[3].ne, EntityClass::kLoc);
  EXPECT_EQ(tokens[4].ne, EntityClass::kLoc);

  tokens = analyze("I went to York", small_resources());
  EXPECT_EQ(tokens[3].ne, EntityClass::kOrg);
}

TEST(EntityTest, PhrasesDoNotCrossPunctuation) {
  auto tokens = analyze("new, york", small_resources());
  EXPECT_FALSE(tokens[0].ne);
  EXPECT_EQ(tokens[2].ne, EntityClass::kOrg);
}

TEST(EntityTest, UncoveredProperNounsAreMisc) {
  auto tokens = analyze("I met Zorblax Quux today", small_resources());
  EXPECT_EQ(tokens[2].ne, EntityClass::kMisc);
  EXPECT_EQ(tokens[3].ne, EntityClass::kMisc);
  EXPECT_FALSE(tokens[4].ne);
}

TEST(EntityTest, TaggingIsIdempotent) {
  const TagResources& res = bundled();
  auto tokens = analyze("Yesterday Tom and I went to New York with BTS!", res);
  auto again = tokens;
  pos_tag(again, res);
  mark_stopwords(again, res);
  detect_entities(again, res);
  ASSERT_EQ(tokens.size(), again.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    EXPECT_EQ(tokens[i].pos, again[i].pos);
    EXPECT_EQ(tokens[i].ne, again[i].ne);
    EXPECT_EQ(tokens[i].is_stopword, again[i].is_stopword);
  }
  EXPECT_EQ(tokens[1].ne, EntityClass::kPerson);
  EXPECT_EQ(tokens[6].ne, EntityClass::kLoc);
  EXPECT_EQ(tokens[7].ne, EntityClass::kLoc);
  EXPECT_EQ(tokens[9].ne, EntityClass::kOrg);
}

TEST(EntityPropertyTest, GazetteerEqualsExhaustiveScan) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> words = {"ka", "Ka", "lo", "Mi", "su", ",", "te"};
  const std::vector<std::string> classes = {"PERSON", "ORG", "LOC", "MISC"};
  for (int round = 0; round < 400; ++round) {
    TagResources res;
    res.suffix_rules = {{"ing", Pos::kVerb}};
    std::vector<std::pair<std::vector<std::string>, std::string>> gaz;
    const std::size_t count = uniform(rng, 0, 6);
    for (std::size_t g = 0; g < count; ++g) {
      std::vector<std::string> phrase;
      const std::size_t len = uniform(rng, 1, 3);
      for (std::size_t k = 0; k < len; ++k) {
        std::string w = pick(rng, words);
        if (w == ",") w = "te";
        phrase.push_back(to_lower(w));
      }
      const std::string key = join(phrase, " ");
      if (res.gazetteer.contains(key)) continue;
      const std::string& cls = pick(rng, classes);
      res.gazetteer[key] = *parse_entity(cls);
      gaz.emplace_back(phrase, cls);
    }
    res.finalize();

    std::string sentence;
    const std::size_t n = uniform(rng, 1, 9);
    for (std::size_t k = 0; k < n; ++k) sentence += pick(rng, words) + " ";
    auto tokens = analyze(sentence, res);

    std::vector<std::string> normalized;
    std::vector<bool> propn;
    for (const Token& t : tokens) {
      normalized.push_back(t.normalized);
      propn.push_back(t.pos == Pos::kPropn);
    }
    auto want = oracle::gazetteer_labels(gaz, normalized, propn);
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      EXPECT_EQ(entity_label(tokens[k].ne), want[k])
          << "round " << round << " sentence '" << sentence << "' token " << k;
    }
  }
}

TEST(TagResourcesTest, LoaderErrors) {
  std::istringstream bad_tag("dog\tNOUN\ncat\tANIMAL\n");
  try {
    load_tag_dictionary(bad_tag);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  std::istringstream bad_cols("ing\n");
  EXPECT_THROW(load_suffix_rules(bad_cols), DataError);
  std::istringstream bad_class("bts\tBAND\n");
  EXPECT_THROW(load_gazetteer(bad_class), DataError);

  TagResources empty_rules;
  EXPECT_THROW(empty_rules.finalize(), DataError);

  TagResources upper;
  upper.suffix_rules = {{"ing", Pos::kVerb}};
  upper.stopwords = {"The"};
  EXPECT_THROW(upper.finalize(), DataError);

  EXPECT_THROW(load_tag_resources({"/nonexistent", "/nonexistent", "/nonexistent", ""}),
               DataError);
}

TEST(TagResourcesTest, NamesRoundTrip) {
  for (Pos p : {Pos::kDet, Pos::kAdp, Pos::kConj, Pos::kPron, Pos::kNoun,
                Pos::kPropn, Pos::kVerb, Pos::kAdj, Pos::kAdv, Pos::kNum,
                Pos::kIntj, Pos::kOther}) {
    EXPECT_EQ(parse_pos(pos_name(p)), p);
  }
  for (EntityClass c : {EntityClass::kPerson, EntityClass::kOrg,
                        EntityClass::kLoc, EntityClass::kMisc}) {
    EXPECT_EQ(parse_entity(entity_name(c)), c);
  }
  EXPECT_FALSE(parse_pos("NOPE"));
}

}  // namespace
}  // namespace pictopipe
