// SPDX-License-Identifier: Apache-2.0
#pragma once

// Terse constructors for hand-written scenario specs.

#include <string>
#include <vector>

#include "irbench/scenario/spec.hpp"

namespace irbench::scenario::build {

ActorRef user(std::string name, std::string credential, std::string ip, std::string account = "primary");
ActorRef role_session(std::string role, std::string from_step, std::string ip, std::string account = "primary");
ActorRef instance_session(std::string instance_id, std::string ip);
ActorRef anonymous(std::string ip);
ActorRef service(std::string service_name);

AttackStep step(std::string id, ActorRef actor, cloud::ActionType type, cloud::Params params,
                DurationMs offset, std::vector<std::string> depends_on = {},
                Intent intent = Intent::malicious);

// Fluent tweaks on the most recently built step.
AttackStep repeated(AttackStep s, int times, DurationMs interval);
AttackStep trigger(AttackStep s);

std::vector<cloud::ObjectSpec> objects(const std::string& pattern, int n, std::int64_t size);

}  // namespace irbench::scenario::build
