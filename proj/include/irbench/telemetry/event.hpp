// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "irbench/core/arn.hpp"
#include "irbench/core/time.hpp"

namespace irbench::telemetry {

enum class IdentityKind { iam_user, assumed_role, anonymous, service };

std::string_view to_string(IdentityKind kind);
IdentityKind identity_kind_from_string(std::string_view text);

struct UserIdentity {
  IdentityKind kind = IdentityKind::anonymous;
  std::optional<Arn> arn;
  std::optional<std::string> account_id;
  std::optional<std::string> access_key_id;

  friend bool operator==(const UserIdentity&, const UserIdentity&) = default;
};

using FieldMap = std::map<std::string, std::string>;

// One CloudTrail-shaped audit record.
struct CloudEvent {
  std::string event_id;
  Timestamp event_time = 0;
  std::string event_source;
  std::string event_name;
  std::string region;
  std::string source_ip;
  UserIdentity user_identity;
  FieldMap request_parameters;
  FieldMap response_elements;
  std::optional<std::string> error_code;  // absent exactly when the call succeeded

  bool succeeded() const { return !error_code.has_value(); }

  friend bool operator==(const CloudEvent&, const CloudEvent&) = default;
};

// Request/response keys that name a resource. The resource filter of the
// query engine and the cost fold both look at these.
inline constexpr std::string_view kResourceKeys[] = {
    "bucketName", "userName", "roleArn", "roleName", "instanceId", "groupId",
};

// True when the event's parameters name `resource`, either by its full ARN
// or by its canonical short name under one of kResourceKeys.
bool touches_resource(const CloudEvent& event, const Arn& resource);

}  // namespace irbench::telemetry
