#include "pictopipe/strings.h"

#include <gtest/gtest.h>

#include <sstream>

namespace pictopipe {
namespace {

TEST(StringsTest, ToLowerLeavesNonAsciiBytes) {
  EXPECT_EQ(to_lower("BTS Rocks"), "bts rocks");
  EXPECT_EQ(to_lower("Caf\xc3\xa9"), "caf\xc3\xa9");
}

TEST(StringsTest, TrimAndSplit) {
  EXPECT_EQ(trim("  a b \t\n"), "a b");
  EXPECT_EQ(trim("   "), "");
  EXPECT_EQ(split_whitespace("  a \t b\nc  "),
            (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(split_whitespace("").empty());
  EXPECT_EQ(split("a\t\tb", '\t'), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(join({"a", "b", "c"}, "_"), "a_b_c");
}

TEST(StringsTest, Utf8Validation) {
  EXPECT_TRUE(is_valid_utf8("plain"));
  EXPECT_TRUE(is_valid_utf8("\xea\xb0\x80"));  // U+AC00
  EXPECT_FALSE(is_valid_utf8("\xff"));
  EXPECT_FALSE(is_valid_utf8("\xc3"));
  EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));  // overlong '/'
}

TEST(StringsTest, MatchCase) {
  EXPECT_EQ(match_case("Do", "can"), "Can");
  EXPECT_EQ(match_case("do", "can"), "can");
  EXPECT_EQ(match_case("DO", "can"), "CAN");
  EXPECT_EQ(match_case("I", "love"), "Love");
}

TEST(StringsTest, ReadLinesStripsCarriageReturns) {
  std::istringstream in("a\r\nb\nc");
  EXPECT_EQ(read_lines(in), (std::vector<std::string>{"a", "b", "c"}));
}

}  // namespace
}  // namespace pictopipe
