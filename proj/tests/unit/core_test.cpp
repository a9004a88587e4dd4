// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "irbench/core/arn.hpp"
#include "irbench/core/category.hpp"
#include "irbench/core/errors.hpp"
#include "irbench/core/json.hpp"
#include "irbench/core/rng.hpp"
#include "irbench/core/time.hpp"

using namespace irbench;

TEST(Arn, RenderParseRoundTrip) {
  for (const Arn& a : {Arn::iam_user("123456789012", "alice"), Arn::iam_role("123456789012", "Admin"),
                       Arn::assumed_role("123456789012", "Admin", "sess"), Arn::bucket("123456789012", "data"),
                       Arn::instance("eu-west-1", "123456789012", "i-0abc"),
                       Arn::security_group("us-east-1", "123456789012", "sg-1")}) {
    EXPECT_EQ(Arn::parse(a.render()), a) << a.render();
  }
  EXPECT_EQ(Arn::iam_role("123456789012", "Admin").render(), "arn:aws:iam::123456789012:role/Admin");
}

TEST(Arn, RejectsMalformed) {
  for (const char* bad : {"", "arn:aws:iam", "arn:aws:iam::12345:user/x", "aws:iam::123456789012:user/x",
                          "arn:aws:iam::123456789012:"}) {
    EXPECT_THROW(Arn::parse(bad), ParseError) << bad;
  }
}

TEST(Time, Rfc3339RoundTrip) {
  const Timestamp t = parse_rfc3339("2024-03-12T08:15:30.250Z");
  EXPECT_EQ(format_rfc3339(t), "2024-03-12T08:15:30.250Z");
  EXPECT_EQ(format_date(t), "2024-03-12");
  EXPECT_EQ(parse_rfc3339("1970-01-01T00:00:00.000Z"), 0);
  EXPECT_THROW(parse_rfc3339("2024-13-01T00:00:00Z"), ParseError);
  EXPECT_THROW(parse_rfc3339("yesterday"), ParseError);
}

TEST(Rng, DeterministicAndBounded) {
  Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(13);
    EXPECT_EQ(x, b.below(13));
    EXPECT_LT(x, 13u);
    const auto y = a.between(-3, 3);
    b.between(-3, 3);
    EXPECT_GE(y, -3);
    EXPECT_LE(y, 3);
  }
  EXPECT_EQ(Rng(1).hex(12).size(), 12u);
}

TEST(Hash, FnvReferenceValues) {
  EXPECT_EQ(stable_hash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(stable_hash("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_NE(mix64(1), mix64(2));
}

TEST(Category, NamesRoundTrip) {
  for (Category c : kAllCategories) EXPECT_EQ(category_from_string(to_string(c)), c);
  EXPECT_THROW(category_from_string("phishing"), ValidationError);
  EXPECT_EQ(verdict_from_string("TP"), Verdict::TP);
}

TEST(Json, FieldErrorsNameTheField) {
  const ojson j = {{"n", "x"}};
  try {
    get_int(j, "n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find('n'), std::string::npos);
  }
  EXPECT_THROW(parse_document("{bad"), ParseError);
  EXPECT_EQ(dump_document(ojson{{"a", 1}}).back(), '\n');
}
