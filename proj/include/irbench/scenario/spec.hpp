// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irbench/cloud/actions.hpp"
#include "irbench/cloud/provision.hpp"
#include "irbench/core/category.hpp"
#include "irbench/core/json.hpp"

namespace irbench::scenario {

enum class Intent { malicious, benign };

std::string_view to_string(Intent i);
Intent intent_from_string(std::string_view text);

// Symbolic identity resolved against the provisioned environment when the
// step runs.
//
// credential:
//   ""              console session (iam_user) or none
//   "key:<n>"       n-th long-term key the user holds
//   "step:<id>"     key returned by an earlier CreateAccessKey/AssumeRole step
//   "instance:<id>" instance-profile session of that instance
struct ActorRef {
  telemetry::IdentityKind kind = telemetry::IdentityKind::anonymous;
  std::string account = "primary";  // alias
  std::string user;
  std::string role;
  std::string credential;
  std::string source_ip;

  friend bool operator==(const ActorRef&, const ActorRef&) = default;
};

struct AttackStep {
  std::string step_id;
  ActorRef actor;
  cloud::ControlAction action;
  DurationMs offset = 0;  // from scenario start
  std::vector<std::string> depends_on;
  Intent intent = Intent::malicious;
  // The step runs `repeat` times, `interval` apart. Parameter values may
  // contain "{rep}", replaced by the 1-based repetition number.
  int repeat = 1;
  DurationMs interval = 0;
  bool triggers_alert = false;

  // Time of the last repetition relative to scenario start.
  DurationMs last_offset() const { return offset + static_cast<DurationMs>(repeat - 1) * interval; }

  friend bool operator==(const AttackStep&, const AttackStep&) = default;
};

struct ScenarioSpec {
  std::string scenario_id;
  Category category = Category::brute_force;
  Verdict intended_verdict = Verdict::TP;
  Timestamp start_time = 0;
  cloud::EnvironmentSpec env_spec;
  std::vector<AttackStep> steps;
  // Slots in braces, e.g. "{user}"; see alert.hpp for the slot names.
  std::string alert_template;
  // Read-only requests by generated users interleaved with the scenario.
  int background_events = 0;
  // How this spec was derived: seed id followed by applied transforms.
  std::vector<std::string> lineage;

  const AttackStep* step(std::string_view id) const;
  bool has_malicious_step() const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

// Structural checks. Throws ValidationError naming the offending field:
// empty steps, duplicate ids, dependencies on unknown or later-declared
// steps, a dependent starting no later than its dependency's last
// repetition, negative offsets, repeat < 1, verdict not matching the intent
// flags, no alert-triggering step, or an invalid environment spec.
void validate(const ScenarioSpec& spec);

ojson actor_to_json(const ActorRef& a);
ActorRef actor_from_json(const ojson& j);
ojson step_to_json(const AttackStep& s);
AttackStep step_from_json(const ojson& j);
ojson scenario_to_json(const ScenarioSpec& spec);
// Throws ParseError / ValidationError; does not call validate().
ScenarioSpec scenario_from_json(const ojson& j);

}  // namespace irbench::scenario
