// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "irbench/cloud/policy.hpp"
#include "irbench/core/arn.hpp"
#include "irbench/core/time.hpp"

namespace irbench::cloud {

enum class PrincipalKind { user, role };

struct AccessKey {
  std::string id;
  Timestamp created_at = 0;
  bool active = true;

  friend bool operator==(const AccessKey&, const AccessKey&) = default;
};

struct IamPrincipal {
  Arn arn;
  PrincipalKind kind = PrincipalKind::user;
  Timestamp created_at = 0;
  std::vector<PolicyDoc> attached_policies;
  std::vector<AccessKey> access_keys;
  std::optional<PolicyDoc> trust_policy;         // roles only
  std::optional<std::string> password_digest;    // users with console access
  std::map<std::string, std::string> tags;

  const std::string& name() const { return arn.resource_name(); }
  bool allows(std::string_view action, std::string_view resource_arn) const;

  friend bool operator==(const IamPrincipal&, const IamPrincipal&) = default;
};

struct S3Object {
  std::string key;
  std::int64_t size = 0;
  Timestamp last_modified = 0;

  friend bool operator==(const S3Object&, const S3Object&) = default;
};

struct S3Bucket {
  std::string name;
  Arn arn;
  Timestamp created_at = 0;
  PolicyDoc policy;
  bool is_public = false;  // mirrors grants_anonymous_read(policy)
  std::vector<S3Object> objects;
  std::map<std::string, std::string> tags;

  const S3Object* object(std::string_view key) const;

  friend bool operator==(const S3Bucket&, const S3Bucket&) = default;
};

struct IngressRule {
  std::string protocol = "tcp";
  int from_port = 0;
  int to_port = 0;
  std::string cidr;

  friend bool operator==(const IngressRule&, const IngressRule&) = default;
};

struct SecurityGroup {
  std::string group_id;
  std::string name;
  std::string region;
  std::vector<IngressRule> ingress;

  friend bool operator==(const SecurityGroup&, const SecurityGroup&) = default;
};

enum class InstanceState { pending, running, stopped, terminated };

std::string_view to_string(InstanceState s);
InstanceState instance_state_from_string(std::string_view s);
// pending->running, running<->stopped, {pending,running,stopped}->terminated.
bool can_transition(InstanceState from, InstanceState to);

struct Ec2Instance {
  std::string instance_id;
  std::string name;
  std::string region;
  std::optional<Arn> profile;  // role ARN in the same environment
  std::vector<std::string> security_groups;
  InstanceState state = InstanceState::running;
  bool ssm_managed = false;
  // Temporary credentials the instance profile hands out; used when a step
  // acts "as the instance".
  std::optional<std::string> profile_session_key;

  friend bool operator==(const Ec2Instance&, const Ec2Instance&) = default;
};

struct Account {
  std::string id;
  std::string alias;
  bool cloudtrail_enabled = true;
  std::map<std::string, IamPrincipal> users;
  std::map<std::string, IamPrincipal> roles;
  std::map<std::string, S3Bucket> buckets;
  std::map<std::string, Ec2Instance> instances;
  std::map<std::string, SecurityGroup> security_groups;

  friend bool operator==(const Account&, const Account&) = default;
};

struct TrustEdge {
  Arn source;  // user or role allowed to assume `target`
  Arn target;  // role

  friend bool operator==(const TrustEdge&, const TrustEdge&) = default;
};

// Temporary credentials issued by AssumeRole or an instance profile.
struct RoleSession {
  std::string access_key_id;
  Arn role;
  std::string session_name;
  Timestamp issued_at = 0;

  friend bool operator==(const RoleSession&, const RoleSession&) = default;
};

struct Environment {
  std::uint64_t seed = 0;
  std::string region = "us-east-1";  // home region
  std::map<std::string, Account> accounts;  // keyed by account id
  std::vector<TrustEdge> trust_edges;
  std::vector<RoleSession> sessions;
  Timestamp clock = 0;
  std::uint64_t sequence = 0;  // events emitted so far

  Account* account(std::string_view id_or_alias);
  const Account* account(std::string_view id_or_alias) const;
  // Account with the given alias, or throws ValidationError.
  const Account& account_by_alias(std::string_view alias) const;
  // The account aliased "primary", else the first one; nullptr when empty.
  const Account* home_account() const;

  const IamPrincipal* principal(const Arn& arn) const;
  IamPrincipal* principal(const Arn& arn);
  const S3Bucket* bucket(std::string_view name) const;  // global namespace
  S3Bucket* bucket(std::string_view name);
  const Ec2Instance* instance(std::string_view id) const;
  Ec2Instance* instance(std::string_view id);
  const SecurityGroup* security_group(std::string_view id) const;
  SecurityGroup* security_group(std::string_view id);
  // Account owning the named bucket/instance/security group.
  const Account* owner_of_bucket(std::string_view name) const;
  const Account* owner_of_instance(std::string_view id) const;
  const Account* owner_of_security_group(std::string_view id) const;

  const RoleSession* session(std::string_view access_key_id) const;
  // (principal, key) for a long-term access key; nullptr when unknown.
  const IamPrincipal* key_owner(std::string_view access_key_id) const;

  bool has_trust_edge(const Arn& source, const Arn& target) const;
  bool access_key_exists(std::string_view id) const;

  friend bool operator==(const Environment&, const Environment&) = default;
};

// Result of lookup_resource; pointers into the environment.
using Resource = std::variant<const IamPrincipal*, const S3Bucket*, const Ec2Instance*,
                              const SecurityGroup*>;

// Never mutates. Unknown account or resource -> nullopt.
std::optional<Resource> lookup_resource(const Environment& env, const Arn& arn);
// Parses first; throws ParseError for malformed text.
std::optional<Resource> lookup_resource(const Environment& env, std::string_view arn_text);

// Every trust edge endpoint and instance profile resolves. Returns the
// dangling references, empty when closed.
std::vector<std::string> dangling_references(const Environment& env);

std::string password_digest(std::string_view password);

}  // namespace irbench::cloud
