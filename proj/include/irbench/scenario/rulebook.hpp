// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/scenario/execute.hpp"

namespace irbench::scenario {

inline constexpr std::string_view kRulebookVersion = "2";

// Exfiltration needs at least this many reads to one source address.
inline constexpr int kExfiltrationMinReads = 10;

struct RuleInfo {
  std::string_view rule_id;
  std::string_view statement_template;
  std::vector<std::string_view> required_tools;
  std::vector<Category> categories;  // empty: every category
  bool benign = false;               // documents benign intent
};

std::span<const RuleInfo> rulebook();
const RuleInfo* find_rule(std::string_view rule_id);

struct ExtractionOptions {
  double tau_alert = kDefaultTauAlert;
  Category category = Category::brute_force;
};

// Correlates the trace with the log and applies every rule. The verdict is
// TP iff some non-background trace entry is malicious. Throws ValidationError
// when a trace entry names an event absent from the log.
GroundTruth extract_ground_truth(const std::vector<TraceEntry>& trace, const telemetry::EventLog& log,
                                 const Alert& alert, const cloud::Environment& env,
                                 const ExtractionOptions& options);

}  // namespace irbench::scenario
