// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "irbench/telemetry/event.hpp"

namespace irbench::telemetry {

// Append-only, time-ordered event log. Position in the log is the tie-break
// sequence for events sharing a timestamp.
class EventLog {
 public:
  EventLog() = default;

  // Throws ValidationError when e is older than the last event or reuses an
  // event id. The log is unchanged on failure.
  void append(CloudEvent e);

  std::span<const CloudEvent> events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const CloudEvent& operator[](std::size_t i) const { return events_[i]; }

  const CloudEvent* find(std::string_view event_id) const;
  std::optional<std::size_t> position_of(std::string_view event_id) const;

  // Sorted log positions of events with the given name / principal key
  // (identity ARN or access key id). Empty when none.
  std::span<const std::size_t> positions_by_name(const std::string& event_name) const;
  std::span<const std::size_t> positions_by_principal(const std::string& principal) const;

  friend bool operator==(const EventLog& a, const EventLog& b) { return a.events_ == b.events_; }

 private:
  std::vector<CloudEvent> events_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_name_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_principal_;
};

}  // namespace irbench::telemetry
