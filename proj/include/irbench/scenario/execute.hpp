// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irbench/cloud/environment.hpp"
#include "irbench/core/errors.hpp"
#include "irbench/scenario/ground_truth.hpp"
#include "irbench/scenario/spec.hpp"
#include "irbench/telemetry/event_log.hpp"

namespace irbench::scenario {

// A step could not be executed (for example it names a resource the
// environment does not contain). field() is "steps.<step id>".
class GenerationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// One executed repetition and the event it emitted.
struct TraceEntry {
  std::string step_id;  // "bg-<n>" for background activity
  int repetition = 1;
  Intent intent = Intent::benign;
  bool triggers_alert = false;
  bool background = false;
  std::string event_id;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct Manifest {
  std::string case_id;
  std::string scenario_id;
  Category category = Category::brute_force;
  std::uint64_t seed = 0;
  std::vector<std::string> lineage;
  std::string rulebook_version;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct CaseBundle {
  Manifest manifest;
  cloud::Environment environment;  // state after the scenario ran
  telemetry::EventLog log;
  Alert alert;
  GroundTruth ground_truth;

  friend bool operator==(const CaseBundle&, const CaseBundle&) = default;
};

struct Execution {
  CaseBundle bundle;
  std::vector<TraceEntry> trace;
};

// Provisions the environment, runs every repetition in schedule order with
// background activity interleaved, instantiates the alert and extracts
// ground truth. Deterministic in (spec, seed). Throws ValidationError for an
// invalid spec and GenerationError when a step cannot run.
Execution execute_scenario(const ScenarioSpec& spec, std::uint64_t seed, std::string case_id = "");

// Fills "{slot}" placeholders from the triggering events. Slots: user,
// principal, role, role_arn, bucket, instance, group, cidr, port,
// access_key, source_ip, account, region, event_name, count, failures,
// first_time, last_time. Throws GenerationError("alert_template") for an
// unknown or unavailable slot.
std::string instantiate_alert(const std::string& tmpl, const std::vector<const telemetry::CloudEvent*>& triggers);

}  // namespace irbench::scenario
