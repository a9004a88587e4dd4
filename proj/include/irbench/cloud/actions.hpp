// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irbench/cloud/environment.hpp"
#include "irbench/core/errors.hpp"
#include "irbench/telemetry/event.hpp"

namespace irbench::cloud {

enum class ActionType {
  ConsoleLogin,
  AssumeRole,
  GetCallerIdentity,
  CreateUser,
  CreateAccessKey,
  UpdateLoginProfile,
  AttachUserPolicy,
  AttachRolePolicy,
  ListUsers,
  ListRoles,
  GetAccountAuthorizationDetails,
  ListBuckets,
  ListObjects,
  ListObjectsV2,
  GetObject,
  SelectObjectContent,
  PutObject,
  PutBucketPolicy,
  PutBucketTagging,
  GetBucketPolicy,
  DescribeInstances,
  DescribeSecurityGroups,
  StartInstances,
  StopInstances,
  TerminateInstances,
  AuthorizeSecurityGroupIngress,
  ModifySecurityGroupRules,
  SendCommand,
  CreateAssociation,
};

struct ActionInfo {
  ActionType type;
  std::string_view name;          // CloudTrail event name
  std::string_view event_source;  // e.g. "iam.amazonaws.com"
  std::string_view permission;    // IAM action checked against policies
  bool read_only;
  bool global;                    // recorded in us-east-1 regardless of region
  std::vector<std::string_view> required_params;
};

const ActionInfo& action_info(ActionType type);
std::span<const ActionInfo> all_actions();
// Throws ValidationError("action", ...) for unknown names.
ActionType action_type_from_string(std::string_view name);
std::string_view to_string(ActionType type);
// Service part of the event source ("s3" for "s3.amazonaws.com").
std::string_view service_of(ActionType type);

using Params = std::map<std::string, std::string>;

struct ControlAction {
  ActionType type;
  Params params;

  friend bool operator==(const ControlAction&, const ControlAction&) = default;
};

// Identity on whose behalf an action runs. For assumed_role the principal is
// the role ARN and access_key_id names the issued session.
struct Actor {
  telemetry::IdentityKind kind = telemetry::IdentityKind::anonymous;
  std::optional<Arn> principal;
  std::optional<std::string> access_key_id;
  std::string session_name;
  std::string source_ip;

  friend bool operator==(const Actor&, const Actor&) = default;
};

// Raised when an action names a resource the environment does not contain.
class UnknownResourceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The single state-transition function of the cloud model. Emits exactly one
// event per call. An authorization or authentication failure is not an
// error: it yields an event with error_code set and leaves the environment
// unchanged apart from the clock and sequence counter.
//
// Throws ValidationError when `at` precedes env.clock, a required parameter
// is missing, or the actor does not resolve; UnknownResourceError when a
// referenced resource does not exist. env is untouched when it throws.
telemetry::CloudEvent apply_control_action(Environment& env, const ControlAction& action,
                                           const Actor& actor, Timestamp at);

}  // namespace irbench::cloud
