// SPDX-License-Identifier: Apache-2.0
#include "irbench/scenario/builders.hpp"

namespace irbench::scenario::build {

using telemetry::IdentityKind;

ActorRef user(std::string name, std::string credential, std::string ip, std::string account) {
  return {IdentityKind::iam_user, std::move(account), std::move(name), "", std::move(credential), std::move(ip)};
}

ActorRef role_session(std::string role, std::string from_step, std::string ip, std::string account) {
  return {IdentityKind::assumed_role, std::move(account), "", std::move(role), "step:" + from_step, std::move(ip)};
}

ActorRef instance_session(std::string instance_id, std::string ip) {
  return {IdentityKind::assumed_role, "primary", "", "", "instance:" + instance_id, std::move(ip)};
}

ActorRef anonymous(std::string ip) { return {IdentityKind::anonymous, "primary", "", "", "", std::move(ip)}; }

ActorRef service(std::string service_name) {
  return {IdentityKind::service, "primary", "", "", "", std::move(service_name)};
}

AttackStep step(std::string id, ActorRef actor, cloud::ActionType type, cloud::Params params,
                DurationMs offset, std::vector<std::string> depends_on, Intent intent) {
  AttackStep s;
  s.step_id = std::move(id);
  s.actor = std::move(actor);
  s.action = {type, std::move(params)};
  s.offset = offset;
  s.depends_on = std::move(depends_on);
  s.intent = intent;
  return s;
}

AttackStep repeated(AttackStep s, int times, DurationMs interval) {
  s.repeat = times;
  s.interval = interval;
  return s;
}

AttackStep trigger(AttackStep s) {
  s.triggers_alert = true;
  return s;
}

std::vector<cloud::ObjectSpec> objects(const std::string& pattern, int n, std::int64_t size) {
  std::vector<cloud::ObjectSpec> out;
  for (int i = 1; i <= n; ++i) {
    std::string key = pattern;
    const auto pos = key.find("{rep}");
    if (pos != std::string::npos) key.replace(pos, 5, std::to_string(i));
    out.push_back({key, size + 1024 * i});
  }
  return out;
}

}  // namespace irbench::scenario::build
