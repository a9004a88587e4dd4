// SPDX-License-Identifier: Apache-2.0
#include "irbench/scenario/spec.hpp"

#include <algorithm>
#include <map>

#include "irbench/cloud/serialize.hpp"
#include "irbench/core/errors.hpp"

namespace irbench::scenario {

std::string_view to_string(Intent i) { return i == Intent::malicious ? "malicious" : "benign"; }

Intent intent_from_string(std::string_view text) {
  if (text == "malicious") return Intent::malicious;
  if (text == "benign") return Intent::benign;
  throw ValidationError("intent", "unknown intent '" + std::string(text) + "'");
}

const AttackStep* ScenarioSpec::step(std::string_view id) const {
  const auto it = std::find_if(steps.begin(), steps.end(),
                               [&](const AttackStep& s) { return s.step_id == id; });
  return it == steps.end() ? nullptr : &*it;
}

bool ScenarioSpec::has_malicious_step() const {
  return std::any_of(steps.begin(), steps.end(),
                     [](const AttackStep& s) { return s.intent == Intent::malicious; });
}

void validate(const ScenarioSpec& spec) {
  if (spec.scenario_id.empty()) throw ValidationError("scenario_id", "must not be empty");
  if (spec.steps.empty()) throw ValidationError("steps", "at least one step is required");
  if (spec.background_events < 0) throw ValidationError("background_events", "must be >= 0");
  if (spec.env_spec.category != spec.category) {
    throw ValidationError("env_spec.category", "differs from the scenario category");
  }
  if (spec.env_spec.provisioned_at > spec.start_time) {
    throw ValidationError("env_spec.provisioned_at", "after the scenario start time");
  }
  cloud::validate(spec.env_spec);

  std::map<std::string, std::size_t> index;
  bool any_trigger = false;
  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    const AttackStep& s = spec.steps[i];
    const std::string field = "steps." + (s.step_id.empty() ? std::to_string(i) : s.step_id);
    if (s.step_id.empty()) throw ValidationError(field, "step id must not be empty");
    if (!index.emplace(s.step_id, i).second) throw ValidationError(field, "duplicate step id");
    if (s.offset < 0) throw ValidationError(field + ".offset", "must be >= 0");
    if (s.repeat < 1) throw ValidationError(field + ".repeat", "must be >= 1");
    if (s.interval < 0) throw ValidationError(field + ".interval", "must be >= 0");
    for (const auto& dep : s.depends_on) {
      const auto it = index.find(dep);
      if (it == index.end() || it->second == i) {
        throw ValidationError(field + ".depends_on",
                              "'" + dep + "' is not an earlier-declared step (cycle or dangling reference)");
      }
      const AttackStep& d = spec.steps[it->second];
      if (s.offset <= d.last_offset()) {
        throw ValidationError(field + ".offset", "must start after dependency '" + dep + "' finishes");
      }
    }
    any_trigger = any_trigger || s.triggers_alert;
  }
  if (!any_trigger) throw ValidationError("steps", "no step triggers the alert");
  if (spec.alert_template.empty()) throw ValidationError("alert_template", "must not be empty");
  const bool tp = spec.has_malicious_step();
  if (tp != (spec.intended_verdict == Verdict::TP)) {
    throw ValidationError("intended_verdict", std::string("is ") + std::string(to_string(spec.intended_verdict)) +
                                                  " but the steps say " + (tp ? "TP" : "FP"));
  }
}

ojson actor_to_json(const ActorRef& a) {
  return {{"kind", std::string(telemetry::to_string(a.kind))},
          {"account", a.account},
          {"user", a.user},
          {"role", a.role},
          {"credential", a.credential},
          {"source_ip", a.source_ip}};
}

ActorRef actor_from_json(const ojson& j) {
  ActorRef a;
  a.kind = telemetry::identity_kind_from_string(get_string(j, "kind"));
  a.account = string_or(j, "account", "primary");
  a.user = string_or(j, "user", "");
  a.role = string_or(j, "role", "");
  a.credential = string_or(j, "credential", "");
  a.source_ip = string_or(j, "source_ip", "");
  return a;
}

ojson step_to_json(const AttackStep& s) {
  return {{"step_id", s.step_id},
          {"actor", actor_to_json(s.actor)},
          {"action", std::string(cloud::to_string(s.action.type))},
          {"params", string_map_to_json(s.action.params)},
          {"offset_ms", s.offset},
          {"depends_on", s.depends_on},
          {"intent", std::string(to_string(s.intent))},
          {"repeat", s.repeat},
          {"interval_ms", s.interval},
          {"triggers_alert", s.triggers_alert}};
}

AttackStep step_from_json(const ojson& j) {
  AttackStep s;
  s.step_id = get_string(j, "step_id");
  s.actor = actor_from_json(field(j, "actor"));
  s.action.type = cloud::action_type_from_string(get_string(j, "action"));
  if (j.contains("params")) s.action.params = get_string_map(j, "params");
  s.offset = int_or(j, "offset_ms", 0);
  if (j.contains("depends_on")) s.depends_on = get_strings(j, "depends_on");
  s.intent = intent_from_string(string_or(j, "intent", "malicious"));
  s.repeat = static_cast<int>(int_or(j, "repeat", 1));
  s.interval = int_or(j, "interval_ms", 0);
  s.triggers_alert = bool_or(j, "triggers_alert", false);
  return s;
}

ojson scenario_to_json(const ScenarioSpec& spec) {
  ojson steps = ojson::array();
  for (const auto& s : spec.steps) steps.push_back(step_to_json(s));
  return {{"scenario_id", spec.scenario_id},
          {"category", std::string(to_string(spec.category))},
          {"intended_verdict", std::string(to_string(spec.intended_verdict))},
          {"start_time", format_rfc3339(spec.start_time)},
          {"env_spec", cloud::env_spec_to_json(spec.env_spec)},
          {"steps", steps},
          {"alert_template", spec.alert_template},
          {"background_events", spec.background_events},
          {"lineage", spec.lineage}};
}

ScenarioSpec scenario_from_json(const ojson& j) {
  ScenarioSpec spec;
  spec.scenario_id = get_string(j, "scenario_id");
  spec.category = category_from_string(get_string(j, "category"));
  spec.intended_verdict = verdict_from_string(get_string(j, "intended_verdict"));
  spec.start_time = parse_rfc3339(get_string(j, "start_time"));
  spec.env_spec = cloud::env_spec_from_json(field(j, "env_spec"));
  for (const auto& s : get_array(j, "steps")) spec.steps.push_back(step_from_json(s));
  spec.alert_template = get_string(j, "alert_template");
  spec.background_events = static_cast<int>(int_or(j, "background_events", 0));
  if (j.contains("lineage")) spec.lineage = get_strings(j, "lineage");
  return spec;
}

}  // namespace irbench::scenario
