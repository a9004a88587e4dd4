// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irbench/telemetry/event_log.hpp"

namespace irbench::telemetry {

// Conjunctive filter over an EventLog. The time range is [start, end).
struct EventQuery {
  Timestamp start = 0;
  Timestamp end = 0;
  std::optional<std::string> event_name;
  // Identity ARN (rendered) or access key id.
  std::optional<std::string> principal;
  std::optional<Arn> resource;
  int max_results = 50;
  std::optional<std::string> page_token;

  // Throws ValidationError when start > end or max_results < 1.
  void validate() const;
};

struct QueryPage {
  std::vector<CloudEvent> events;
  std::optional<std::string> next_page_token;
};

// Matching events in log order, at most q.max_results, with a continuation
// token iff more matches remain. Throws ValidationError for an invalid query
// and ParseError for a malformed or foreign page token.
QueryPage lookup_events(const EventLog& log, const EventQuery& q);

// Follows continuation tokens until exhausted.
std::vector<CloudEvent> lookup_all(const EventLog& log, EventQuery q);

// Whether a single event passes the filters of q (time range included).
bool matches(const CloudEvent& e, const EventQuery& q);

// Query covering every event of the log.
EventQuery whole_log_query(const EventLog& log);

}  // namespace irbench::telemetry
