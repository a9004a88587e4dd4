// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "irbench/core/errors.hpp"
#include "irbench/telemetry/jsonl.hpp"
#include "irbench/telemetry/query.hpp"
#include "oracles.hpp"

using namespace irbench;
using namespace irbench::telemetry;

namespace {

std::vector<std::string> ids(const std::vector<CloudEvent>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) out.push_back(e.event_id);
  return out;
}

}  // namespace

TEST(EventLog, RejectsOutOfOrderAndDuplicateIds) {
  EventLog log;
  CloudEvent e;
  e.event_id = "a";
  e.event_time = 10;
  log.append(e);
  e.event_id = "b";
  e.event_time = 9;
  EXPECT_THROW(log.append(e), ValidationError);
  e.event_id = "a";
  e.event_time = 11;
  EXPECT_THROW(log.append(e), ValidationError);
  EXPECT_EQ(log.size(), 1u);
}

TEST(Query, MatchesLinearScanWithPagination) {
  Rng rng(2024);
  for (int round = 0; round < 60; ++round) {
    const EventLog log = oracle::random_log(rng, rng.below(400));
    for (int k = 0; k < 5; ++k) {
      const EventQuery q = oracle::random_query(rng, log);
      const auto expected = oracle::scan_query(log, q);
      std::vector<std::string> got;
      EventQuery paged = q;
      for (;;) {
        const QueryPage page = lookup_events(log, paged);
        ASSERT_LE(page.events.size(), static_cast<std::size_t>(q.max_results));
        for (const auto& e : page.events) got.push_back(e.event_id);
        if (!page.next_page_token) break;
        ASSERT_FALSE(page.events.empty());
        paged.page_token = page.next_page_token;
      }
      EXPECT_EQ(got, expected);
      EXPECT_EQ(ids(lookup_all(log, q)), expected);
    }
  }
}

TEST(Query, TokenPresentExactlyWhenMoreRemain) {
  Rng rng(3);
  const EventLog log = oracle::random_log(rng, 30);
  EventQuery q = whole_log_query(log);
  q.max_results = 30;
  EXPECT_FALSE(lookup_events(log, q).next_page_token);
  q.max_results = 29;
  EXPECT_TRUE(lookup_events(log, q).next_page_token);
}

TEST(Query, RejectsBadTokensAndRanges) {
  Rng rng(4);
  const EventLog log = oracle::random_log(rng, 20);
  EventQuery q = whole_log_query(log);
  q.max_results = 5;
  const auto token = lookup_events(log, q).next_page_token;
  ASSERT_TRUE(token);
  EventQuery other = q;
  other.event_name = "ConsoleLogin";
  other.page_token = token;
  EXPECT_THROW(lookup_events(log, other), ParseError);
  q.page_token = "garbage";
  EXPECT_THROW(lookup_events(log, q), ParseError);
  q.page_token.reset();
  q.start = q.end + 1;
  EXPECT_THROW(lookup_events(log, q), ValidationError);
  q = whole_log_query(log);
  q.max_results = 0;
  EXPECT_THROW(lookup_events(log, q), ValidationError);
}

TEST(Jsonl, RoundTrip) {
  Rng rng(11);
  const EventLog log = oracle::random_log(rng, 50);
  const EventLog back = parse_log(serialize_log(log));
  EXPECT_EQ(back, log);
  EXPECT_EQ(serialize_log(back), serialize_log(log));
}

TEST(Jsonl, ParseErrorsCarryLineNumbers) {
  Rng rng(12);
  std::string text = serialize_log(oracle::random_log(rng, 3));
  text += "{not json}\n";
  try {
    parse_log(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}
