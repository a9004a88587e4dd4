// SPDX-License-Identifier: Apache-2.0
#include "irbench/telemetry/event_log.hpp"

#include "irbench/core/errors.hpp"

namespace irbench::telemetry {

void EventLog::append(CloudEvent e) {
  if (e.event_id.empty()) throw ValidationError("event_id", "must not be empty");
  if (!events_.empty() && e.event_time < events_.back().event_time) {
    throw ValidationError("event_time",
                          "out-of-order append: " + format_rfc3339(e.event_time) +
                              " is older than last event at " +
                              format_rfc3339(events_.back().event_time));
  }
  if (by_id_.count(e.event_id)) throw ValidationError("event_id", "duplicate id " + e.event_id);

  const std::size_t pos = events_.size();
  by_id_.emplace(e.event_id, pos);
  by_name_[e.event_name].push_back(pos);
  if (e.user_identity.arn) by_principal_[e.user_identity.arn->render()].push_back(pos);
  if (e.user_identity.access_key_id) by_principal_[*e.user_identity.access_key_id].push_back(pos);
  events_.push_back(std::move(e));
}

const CloudEvent* EventLog::find(std::string_view event_id) const {
  const auto pos = position_of(event_id);
  return pos ? &events_[*pos] : nullptr;
}

std::optional<std::size_t> EventLog::position_of(std::string_view event_id) const {
  const auto it = by_id_.find(std::string(event_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> EventLog::positions_by_name(const std::string& event_name) const {
  const auto it = by_name_.find(event_name);
  if (it == by_name_.end()) return {};
  return it->second;
}

std::span<const std::size_t> EventLog::positions_by_principal(const std::string& principal) const {
  const auto it = by_principal_.find(principal);
  if (it == by_principal_.end()) return {};
  return it->second;
}

}  // namespace irbench::telemetry
