// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "irbench/text/rouge.hpp"
#include "oracles.hpp"

using namespace irbench;
using text::Tokens;

TEST(Tokenize, LowercasesAndStripsEdges) {
  EXPECT_EQ(text::tokenize("Attacker assumed Role X."), (Tokens{"attacker", "assumed", "role", "x"}));
  EXPECT_EQ(text::tokenize("  (hello),   world!  "), (Tokens{"hello", "world"}));
  EXPECT_TRUE(text::tokenize("").empty());
  EXPECT_TRUE(text::tokenize(" ... ").empty());
}

TEST(Tokenize, KeepsArnsIpsAndEventNames) {
  const Tokens t = text::tokenize("arn:aws:iam::123456789012:role/Admin stays intact");
  ASSERT_FALSE(t.empty());
  EXPECT_EQ(t[0], "arn:aws:iam::123456789012:role/admin");
  EXPECT_EQ(text::tokenize("from 203.0.113.7, via ListObjectsV2.")[1], "203.0.113.7");
  EXPECT_EQ(text::tokenize("from 203.0.113.7, via ListObjectsV2.")[3], "listobjectsv2");
}

TEST(Tokenize, IdempotentOnFuzzCorpus) {
  Rng rng(99);
  const std::string alphabet = "abcXYZ019 .,:;/-_!?()'\"\t\n";
  for (int i = 0; i < 1000; ++i) {
    const std::string s = rng.chars(alphabet, rng.below(40));
    const Tokens once = text::tokenize(s);
    EXPECT_EQ(text::tokenize(oracle::join(once)), once) << s;
  }
}

TEST(Rouge, Examples) {
  EXPECT_DOUBLE_EQ(text::rouge_l(Tokens{"a", "b"}, Tokens{"a", "b"}), 1.0);
  EXPECT_DOUBLE_EQ(text::rouge_l(Tokens{"a", "b"}, Tokens{"c", "d"}), 0.0);
  EXPECT_NEAR(text::rouge_l(Tokens{"a", "b", "c", "d"}, Tokens{"a", "c", "d"}), 0.857, 0.001);
  EXPECT_DOUBLE_EQ(text::rouge_l(Tokens{}, Tokens{"a"}), 0.0);
  EXPECT_DOUBLE_EQ(text::rouge_l(Tokens{}, Tokens{}), 0.0);
}

TEST(Rouge, BoundsSymmetryIdentityAgainstOracle) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto a = oracle::random_words(rng, rng.below(15), 8);
    const auto b = oracle::random_words(rng, rng.below(15), 8);
    const double s = text::rouge_l(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_DOUBLE_EQ(s, text::rouge_l(b, a));
    EXPECT_NEAR(s, oracle::brute_rouge(a, b), 1e-12);
    EXPECT_EQ(text::lcs_length(a, b), oracle::brute_lcs(a, b));
    if (!a.empty()) {
      EXPECT_DOUBLE_EQ(text::rouge_l(a, a), 1.0);
    }
  }
}
