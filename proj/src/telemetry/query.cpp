// SPDX-License-Identifier: Apache-2.0
#include "irbench/telemetry/query.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "irbench/core/errors.hpp"
#include "irbench/core/rng.hpp"

namespace irbench::telemetry {
namespace {

constexpr std::string_view kTokenPrefix = "pt1.";

// Binds a token to the filters it was issued for, so a token cannot be
// replayed against a different query. Page size is deliberately excluded.
std::uint64_t fingerprint(const EventQuery& q) {
  std::string key = std::to_string(q.start) + "|" + std::to_string(q.end) + "|";
  key += q.event_name ? "n:" + *q.event_name : "-";
  key += "|";
  key += q.principal ? "p:" + *q.principal : "-";
  key += "|";
  key += q.resource ? "r:" + q.resource->render() : "-";
  return stable_hash(key);
}

std::string encode_token(std::size_t position, const EventQuery& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%llx.%016llx", static_cast<unsigned long long>(position),
                static_cast<unsigned long long>(fingerprint(q)));
  return std::string(kTokenPrefix) + buf;
}

bool parse_hex(std::string_view s, std::uint64_t& out) {
  if (s.empty() || s.size() > 16) return false;
  out = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else return false;
    out = out * 16 + static_cast<std::uint64_t>(d);
  }
  return true;
}

std::size_t decode_token(std::string_view token, const EventQuery& q, std::size_t log_size) {
  const auto bad = [&](const char* why) {
    return ParseError("malformed page token '" + std::string(token) + "': " + why);
  };
  if (token.substr(0, kTokenPrefix.size()) != kTokenPrefix) throw bad("unknown prefix");
  token.remove_prefix(kTokenPrefix.size());
  const auto dot = token.find('.');
  if (dot == std::string_view::npos) throw bad("missing separator");
  std::uint64_t position = 0, fp = 0;
  if (!parse_hex(token.substr(0, dot), position) || !parse_hex(token.substr(dot + 1), fp)) {
    throw bad("not hex");
  }
  if (fp != fingerprint(q)) throw bad("issued for a different query");
  if (position >= log_size) throw bad("position past end of log");
  return static_cast<std::size_t>(position);
}

// Iterates candidate positions >= `from` in log order, from either an index
// posting list or the raw log.
class Candidates {
 public:
  Candidates(const EventLog& log, const EventQuery& q, std::size_t from) : log_(log) {
    if (q.principal) {
      list_ = log.positions_by_principal(*q.principal);
      use_list_ = true;
    }
    if (q.event_name) {
      const auto by_name = log.positions_by_name(*q.event_name);
      if (!use_list_ || by_name.size() < list_.size()) list_ = by_name;
      use_list_ = true;
    }
    if (use_list_) {
      cursor_ = static_cast<std::size_t>(std::lower_bound(list_.begin(), list_.end(), from) - list_.begin());
    } else {
      const auto events = log.events();
      const auto first_in_range = std::lower_bound(
          events.begin(), events.end(), q.start,
          [](const CloudEvent& e, Timestamp t) { return e.event_time < t; });
      cursor_ = std::max(from, static_cast<std::size_t>(first_in_range - events.begin()));
    }
  }

  std::optional<std::size_t> next() {
    if (use_list_) {
      if (cursor_ >= list_.size()) return std::nullopt;
      return list_[cursor_++];
    }
    if (cursor_ >= log_.size()) return std::nullopt;
    return cursor_++;
  }

 private:
  const EventLog& log_;
  std::span<const std::size_t> list_;
  bool use_list_ = false;
  std::size_t cursor_ = 0;
};

}  // namespace

void EventQuery::validate() const {
  if (start > end) throw ValidationError("time_range", "start is after end");
  if (max_results < 1) throw ValidationError("max_results", "must be at least 1");
}

bool matches(const CloudEvent& e, const EventQuery& q) {
  if (e.event_time < q.start || e.event_time >= q.end) return false;
  if (q.event_name && e.event_name != *q.event_name) return false;
  if (q.principal) {
    const auto& id = e.user_identity;
    const bool by_arn = id.arn && id.arn->render() == *q.principal;
    const bool by_key = id.access_key_id && *id.access_key_id == *q.principal;
    if (!by_arn && !by_key) return false;
  }
  if (q.resource && !touches_resource(e, *q.resource)) return false;
  return true;
}

QueryPage lookup_events(const EventLog& log, const EventQuery& q) {
  q.validate();
  QueryPage page;
  if (log.empty()) {
    if (q.page_token) throw ParseError("malformed page token '" + *q.page_token + "': log is empty");
    return page;
  }
  const std::size_t from = q.page_token ? decode_token(*q.page_token, q, log.size()) : 0;

  Candidates candidates(log, q, from);
  while (auto pos = candidates.next()) {
    const CloudEvent& e = log[*pos];
    if (e.event_time >= q.end) break;  // log is time ordered
    if (!matches(e, q)) continue;
    if (page.events.size() == static_cast<std::size_t>(q.max_results)) {
      page.next_page_token = encode_token(*pos, q);
      break;
    }
    page.events.push_back(e);
  }
  return page;
}

std::vector<CloudEvent> lookup_all(const EventLog& log, EventQuery q) {
  std::vector<CloudEvent> out;
  q.page_token.reset();
  for (;;) {
    QueryPage page = lookup_events(log, q);
    out.insert(out.end(), std::make_move_iterator(page.events.begin()),
               std::make_move_iterator(page.events.end()));
    if (!page.next_page_token) return out;
    q.page_token = std::move(page.next_page_token);
  }
}

EventQuery whole_log_query(const EventLog& log) {
  EventQuery q;
  if (!log.empty()) {
    q.start = log[0].event_time;
    q.end = log[log.size() - 1].event_time + 1;
  }
  q.max_results = 1000;
  return q;
}

}  // namespace irbench::telemetry
