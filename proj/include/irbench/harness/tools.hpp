// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irbench/cloud/environment.hpp"
#include "irbench/harness/protocol.hpp"
#include "irbench/telemetry/event_log.hpp"

namespace irbench::harness {

struct ParamSpec {
  std::string name;
  std::string type;  // string | integer | timestamp | date
  bool required = false;
  std::string description;
};

struct ToolSpec {
  std::string name;
  std::string description;
  std::vector<ParamSpec> parameters;
};

const std::vector<ToolSpec>& tool_catalog();
const ToolSpec* find_tool(std::string_view name);
ojson catalog_to_json();

// What tools may read. The ground truth is deliberately not part of it.
struct ToolContext {
  const cloud::Environment& env;
  const telemetry::EventLog& log;
};

// Pure in (context, call). Unknown tools and bad parameters come back as
// error results; nothing throws.
ToolResult answer_tool_call(const ToolContext& ctx, const ToolCall& call);

// Simulated spend in nano-USD for one event.
std::int64_t event_cost_nano(const telemetry::CloudEvent& e);
std::string service_display_name(std::string_view event_source);

}  // namespace irbench::harness
