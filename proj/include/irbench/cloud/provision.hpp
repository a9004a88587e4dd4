// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irbench/cloud/environment.hpp"
#include "irbench/core/category.hpp"

namespace irbench::cloud {

// Declared resources carry explicit names so scenario steps can refer to
// them; filler resources are generated from the seed.

struct UserSpec {
  std::string account = "primary";
  std::string name;
  std::vector<std::string> policies;  // managed policy names
  std::optional<std::string> password;
  int access_keys = 0;
  std::map<std::string, std::string> tags;

  friend bool operator==(const UserSpec&, const UserSpec&) = default;
};

// "user:<account alias>/<name>" or "role:<account alias>/<name>".
struct PrincipalName {
  PrincipalKind kind = PrincipalKind::user;
  std::string account = "primary";
  std::string name;

  std::string render() const;
  static PrincipalName parse(const std::string& text);

  friend bool operator==(const PrincipalName&, const PrincipalName&) = default;
};

struct RoleSpec {
  std::string account = "primary";
  std::string name;
  std::vector<std::string> policies;
  std::vector<PrincipalName> trusted;          // become trust edges
  std::vector<std::string> trusted_services;   // e.g. "codebuild.amazonaws.com"

  friend bool operator==(const RoleSpec&, const RoleSpec&) = default;
};

struct ObjectSpec {
  std::string key;
  std::int64_t size = 0;

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct BucketSpec {
  std::string account = "primary";
  std::string name;
  std::string grant = "private";  // see bucket_policy_for_grant
  std::vector<ObjectSpec> objects;
  std::map<std::string, std::string> tags;

  friend bool operator==(const BucketSpec&, const BucketSpec&) = default;
};

struct SecurityGroupSpec {
  std::string account = "primary";
  std::string group_id;
  std::string name;
  std::vector<IngressRule> ingress;

  friend bool operator==(const SecurityGroupSpec&, const SecurityGroupSpec&) = default;
};

struct InstanceSpec {
  std::string account = "primary";
  std::string instance_id;
  std::string name;
  std::optional<std::string> profile_role;  // role name in the same account
  std::vector<std::string> security_groups;
  InstanceState state = InstanceState::running;
  bool ssm_managed = true;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

// Counts of generated background resources. Unset fields take the
// category default; explicit zero means none.
struct FillerCounts {
  std::optional<int> users;
  std::optional<int> roles;
  std::optional<int> buckets;
  std::optional<int> objects_per_bucket;
  std::optional<int> security_groups;
  std::optional<int> instances;

  friend bool operator==(const FillerCounts&, const FillerCounts&) = default;
};

struct ResolvedCounts {
  int users = 0, roles = 0, buckets = 0, objects_per_bucket = 0, security_groups = 0,
      instances = 0;
};

// Baseline infrastructure of each category.
ResolvedCounts default_counts(Category c);

struct EnvironmentSpec {
  Category category = Category::brute_force;
  std::string region = "us-east-1";
  std::vector<std::string> accounts = {"primary"};  // aliases; first is home
  bool cloudtrail_enabled = true;
  Timestamp provisioned_at = 0;
  std::vector<UserSpec> users;
  std::vector<RoleSpec> roles;
  std::vector<BucketSpec> buckets;
  std::vector<SecurityGroupSpec> security_groups;
  std::vector<InstanceSpec> instances;
  FillerCounts filler;

  ResolvedCounts counts() const;

  friend bool operator==(const EnvironmentSpec&, const EnvironmentSpec&) = default;
};

// Throws ValidationError naming the offending field (negative count,
// unknown account alias, duplicate or dangling names, unknown policy).
void validate(const EnvironmentSpec& spec);

// Deterministic in (spec, seed): account ids, filler names and key ids all
// derive from the seed. Emits no events.
Environment provision_environment(const EnvironmentSpec& spec, std::uint64_t seed);

}  // namespace irbench::cloud
