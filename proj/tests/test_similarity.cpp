#include <gtest/gtest.h>

#include <random>

#include "graphled/similarity.hpp"
#include "graphled/utf8.hpp"
#include "oracles/strings.hpp"

using namespace graphled;

namespace {

std::u32string u(std::string_view s) { return utf8::decode(s); }

std::vector<std::u32string> all_strings(std::size_t max_len, std::u32string_view alphabet) {
  std::vector<std::u32string> out{U""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char32_t c : alphabet) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

std::u32string random_string(std::mt19937& rng, std::size_t max_len, std::u32string_view alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), pick(0, alphabet.size() - 1);
  std::u32string s(len(rng), U'a');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

}  // namespace

TEST(Utf8, RoundTripsMultibyte) {
  const std::string s = "Aço – naïve 日本 🚀";
  EXPECT_EQ(utf8::encode(utf8::decode(s)), s);
  EXPECT_EQ(utf8::decode("é").size(), 1u);
}

TEST(Utf8, InvalidBytesBecomeReplacement) {
  const auto d = utf8::decode(std::string("a\xff" "b\xc3", 4));
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[1], U'�');
  EXPECT_EQ(d[3], U'�');
}

TEST(Levenshtein, KnownValues) {
  EXPECT_EQ(levenshtein_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(levenshtein_distance("", "abc"), 3u);
  EXPECT_EQ(levenshtein_distance("supplier a", "suplier a"), 1u);
  EXPECT_EQ(levenshtein_distance("flaw", "lawn"), 2u);
  EXPECT_EQ(levenshtein_distance("Aço", "Aco"), 1u);
}

TEST(Levenshtein, MatchesOracleOnRandomPairs) {
  std::mt19937 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_string(rng, 9, U"abcd");
    const auto b = random_string(rng, 9, U"abcd");
    ASSERT_EQ(levenshtein_distance(a, b), oracle::levenshtein(a, b));
  }
}

TEST(Levenshtein, IsAMetric) {
  const auto strings = all_strings(3, U"ab");
  for (const auto& a : strings) {
    EXPECT_EQ(levenshtein_distance(a, a), 0u);
    for (const auto& b : strings) {
      const auto ab = levenshtein_distance(a, b);
      EXPECT_EQ(ab, levenshtein_distance(b, a));
      if (a != b) EXPECT_GT(ab, 0u);
      for (const auto& c : strings) EXPECT_LE(levenshtein_distance(a, c), ab + levenshtein_distance(b, c));
    }
  }
}

TEST(Lcs, KnownValues) {
  EXPECT_EQ(lcs_length("ABCBDAB", "BDCABA"), 4u);
  EXPECT_EQ(lcs_length("", "abc"), 0u);
  EXPECT_EQ(lcs_length("abc", "abc"), 3u);
}

TEST(Lcs, MatchesOracleOnRandomPairs) {
  std::mt19937 rng(12);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_string(rng, 10, U"abc");
    const auto b = random_string(rng, 10, U"abc");
    ASSERT_EQ(lcs_length(a, b), oracle::lcs(a, b));
    ASSERT_EQ(lcs_length(a, b), lcs_length(b, a));
    ASSERT_LE(lcs_length(a, b), std::min(a.size(), b.size()));
  }
}

// Reference values produced by Python's difflib.SequenceMatcher with
// autojunk=False, taking the larger ratio of the two argument orders.
TEST(SequenceMatcher, AgreesWithDifflib) {
  struct Case {
    const char* a;
    const char* b;
    double ratio;
  };
  const Case cases[] = {
      {"ab", "bacb", 0.6666666666666666},
      {"bacb", "ab", 0.6666666666666666},
      {"abcd", "bcde", 0.75},
      {"supplier a", "suplier a", 0.9473684210526315},
      {"tenaris confab", "tenaris confab s a", 0.875},
      {"abc", "", 0.0},
      {"", "", 1.0},
      {"a b c", "a  b c", 0.9090909090909091},
      {"private thing", "thing private", 0.5384615384615384},
      {"qabxcd", "abycdf", 0.6666666666666666},
      {"br weatherford industria", "weatherford industria br", 0.875},
      {"ht 123456", "ht 1z3456", 0.8888888888888888},
  };
  for (const auto& c : cases) {
    EXPECT_DOUBLE_EQ(sequence_matcher_ratio(c.a, c.b), c.ratio) << c.a << " / " << c.b;
    EXPECT_DOUBLE_EQ(sequence_matcher_ratio(c.a, c.b, CharSet{U' '}), c.ratio) << c.a << " / " << c.b;
  }
}

TEST(SequenceMatcher, BlocksAgreeWithDifflib) {
  using B = std::vector<MatchBlock>;
  EXPECT_EQ(matching_blocks(u("ab"), u("bacb")), (B{{0, 1, 1}, {1, 3, 1}}));
  EXPECT_EQ(matching_blocks(u("private thing"), u("thing private"), {U' '}), (B{{0, 6, 7}}));
  EXPECT_EQ(matching_blocks(u("a b c"), u("a  b c"), {U' '}), (B{{0, 0, 2}, {2, 3, 3}}));
  EXPECT_EQ(matching_blocks(u(" abcd"), u("abcd abcd"), {U' '}), (B{{1, 0, 4}}));
  EXPECT_EQ(matching_blocks(u("qabxcd"), u("abycdf")), (B{{1, 0, 2}, {4, 3, 2}}));
}

TEST(SequenceMatcher, MatchesOracleWithAndWithoutJunk) {
  std::mt19937 rng(13);
  for (int i = 0; i < 3000; ++i) {
    const auto a = random_string(rng, 10, U"ab c");
    const auto b = random_string(rng, 10, U"ab c");
    ASSERT_DOUBLE_EQ(sequence_matcher_ratio(a, b), oracle::sequence_ratio(a, b));
    ASSERT_DOUBLE_EQ(sequence_matcher_ratio(a, b, {U' '}), oracle::sequence_ratio(a, b, {U' '}));
  }
}

TEST(SequenceMatcher, RatioProperties) {
  const auto strings = all_strings(4, U"abc");
  for (std::size_t i = 0; i < strings.size(); i += 7) {
    for (std::size_t j = 0; j < strings.size(); j += 5) {
      const double r = sequence_matcher_ratio(strings[i], strings[j]);
      EXPECT_GE(r, 0.0);
      EXPECT_LE(r, 1.0);
      EXPECT_EQ(r, sequence_matcher_ratio(strings[j], strings[i]));
      EXPECT_EQ(r == 1.0, strings[i] == strings[j]);
    }
  }
}

TEST(SequenceMatcher, CountsCodePoints) {
  EXPECT_DOUBLE_EQ(sequence_matcher_ratio("aço", "aco"), 2.0 * 2 / 6);
}
