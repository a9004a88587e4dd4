// SPDX-License-Identifier: Apache-2.0
#include "irbench/cloud/actions.hpp"

#include <algorithm>
#include <functional>

#include <json.hpp>

#include "irbench/cloud/serialize.hpp"
#include "irbench/core/errors.hpp"
#include "irbench/core/rng.hpp"

namespace irbench::cloud {

using telemetry::CloudEvent;
using telemetry::IdentityKind;

namespace {

using A = ActionType;

const std::vector<ActionInfo>& table() {
  static const std::vector<ActionInfo> rows = {
      {A::ConsoleLogin, "ConsoleLogin", "signin.amazonaws.com", "signin:ConsoleLogin", false, true, {"userName", "password"}},
      {A::AssumeRole, "AssumeRole", "sts.amazonaws.com", "sts:AssumeRole", false, true, {"roleName", "roleSessionName"}},
      {A::GetCallerIdentity, "GetCallerIdentity", "sts.amazonaws.com", "sts:GetCallerIdentity", true, true, {}},
      {A::CreateUser, "CreateUser", "iam.amazonaws.com", "iam:CreateUser", false, true, {"userName"}},
      {A::CreateAccessKey, "CreateAccessKey", "iam.amazonaws.com", "iam:CreateAccessKey", false, true, {}},
      {A::UpdateLoginProfile, "UpdateLoginProfile", "iam.amazonaws.com", "iam:UpdateLoginProfile", false, true, {"userName", "password"}},
      {A::AttachUserPolicy, "AttachUserPolicy", "iam.amazonaws.com", "iam:AttachUserPolicy", false, true, {"userName", "policyName"}},
      {A::AttachRolePolicy, "AttachRolePolicy", "iam.amazonaws.com", "iam:AttachRolePolicy", false, true, {"roleName", "policyName"}},
      {A::ListUsers, "ListUsers", "iam.amazonaws.com", "iam:ListUsers", true, true, {}},
      {A::ListRoles, "ListRoles", "iam.amazonaws.com", "iam:ListRoles", true, true, {}},
      {A::GetAccountAuthorizationDetails, "GetAccountAuthorizationDetails", "iam.amazonaws.com", "iam:GetAccountAuthorizationDetails", true, true, {}},
      {A::ListBuckets, "ListBuckets", "s3.amazonaws.com", "s3:ListAllMyBuckets", true, false, {}},
      {A::ListObjects, "ListObjects", "s3.amazonaws.com", "s3:ListBucket", true, false, {"bucketName"}},
      {A::ListObjectsV2, "ListObjectsV2", "s3.amazonaws.com", "s3:ListBucket", true, false, {"bucketName"}},
      {A::GetObject, "GetObject", "s3.amazonaws.com", "s3:GetObject", true, false, {"bucketName", "key"}},
      {A::SelectObjectContent, "SelectObjectContent", "s3.amazonaws.com", "s3:GetObject", true, false, {"bucketName", "key"}},
      {A::PutObject, "PutObject", "s3.amazonaws.com", "s3:PutObject", false, false, {"bucketName", "key"}},
      {A::PutBucketPolicy, "PutBucketPolicy", "s3.amazonaws.com", "s3:PutBucketPolicy", false, false, {"bucketName", "grant"}},
      {A::PutBucketTagging, "PutBucketTagging", "s3.amazonaws.com", "s3:PutBucketTagging", false, false, {"bucketName", "tags"}},
      {A::GetBucketPolicy, "GetBucketPolicy", "s3.amazonaws.com", "s3:GetBucketPolicy", true, false, {"bucketName"}},
      {A::DescribeInstances, "DescribeInstances", "ec2.amazonaws.com", "ec2:DescribeInstances", true, false, {}},
      {A::DescribeSecurityGroups, "DescribeSecurityGroups", "ec2.amazonaws.com", "ec2:DescribeSecurityGroups", true, false, {}},
      {A::StartInstances, "StartInstances", "ec2.amazonaws.com", "ec2:StartInstances", false, false, {"instanceId"}},
      {A::StopInstances, "StopInstances", "ec2.amazonaws.com", "ec2:StopInstances", false, false, {"instanceId"}},
      {A::TerminateInstances, "TerminateInstances", "ec2.amazonaws.com", "ec2:TerminateInstances", false, false, {"instanceId"}},
      {A::AuthorizeSecurityGroupIngress, "AuthorizeSecurityGroupIngress", "ec2.amazonaws.com", "ec2:AuthorizeSecurityGroupIngress", false, false, {"groupId", "port", "cidr"}},
      {A::ModifySecurityGroupRules, "ModifySecurityGroupRules", "ec2.amazonaws.com", "ec2:ModifySecurityGroupRules", false, false, {"groupId", "port", "cidr"}},
      {A::SendCommand, "SendCommand", "ssm.amazonaws.com", "ssm:SendCommand", false, false, {"instanceId", "commands"}},
      {A::CreateAssociation, "CreateAssociation", "ssm.amazonaws.com", "ssm:CreateAssociation", false, false, {"instanceId", "commands"}},
  };
  return rows;
}

constexpr std::string_view kKeyAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";

std::string new_key_id(const Environment& env, std::string_view prefix) {
  Rng rng(mix64(env.seed ^ mix64(env.sequence + 0x5eed)));
  for (;;) {
    std::string id = std::string(prefix) + rng.chars(kKeyAlphabet, 16);
    if (!env.access_key_exists(id)) return id;
  }
}

std::string event_id(const Environment& env) {
  const std::uint64_t hi = mix64(env.seed ^ mix64(env.sequence));
  return uuid_from(hi, mix64(hi ^ env.sequence));
}

// Authenticated caller derived from an Actor.
struct Caller {
  IdentityKind kind = IdentityKind::anonymous;
  const IamPrincipal* principal = nullptr;
  std::string account_id;
  bool authenticated = true;
  telemetry::UserIdentity identity;
};

Caller resolve_caller(const Environment& env, const Actor& actor) {
  Caller c;
  c.kind = actor.kind;
  c.identity.kind = actor.kind;
  switch (actor.kind) {
    case IdentityKind::iam_user: {
      if (!actor.principal) throw ValidationError("actor", "iam_user actor needs a principal");
      c.principal = env.principal(*actor.principal);
      if (!c.principal || c.principal->kind != PrincipalKind::user) {
        throw ValidationError("actor", "unknown user " + actor.principal->render());
      }
      c.account_id = actor.principal->account_id;
      if (actor.access_key_id) {
        const auto& keys = c.principal->access_keys;
        c.authenticated = std::any_of(keys.begin(), keys.end(), [&](const AccessKey& k) {
          return k.id == *actor.access_key_id && k.active;
        });
      }
      c.identity.arn = *actor.principal;
      c.identity.account_id = c.account_id;
      c.identity.access_key_id = actor.access_key_id;
      break;
    }
    case IdentityKind::assumed_role: {
      if (!actor.principal) throw ValidationError("actor", "assumed_role actor needs a role");
      if (!actor.access_key_id) throw ValidationError("actor", "assumed_role actor needs a session key");
      c.principal = env.principal(*actor.principal);
      if (!c.principal || c.principal->kind != PrincipalKind::role) {
        throw ValidationError("actor", "unknown role " + actor.principal->render());
      }
      c.account_id = actor.principal->account_id;
      const RoleSession* s = env.session(*actor.access_key_id);
      c.authenticated = s && s->role == *actor.principal;
      const std::string session_name = s ? s->session_name : actor.session_name;
      c.identity.arn = Arn::assumed_role(c.account_id, c.principal->name(),
                                         session_name.empty() ? "session" : session_name);
      c.identity.account_id = c.account_id;
      c.identity.access_key_id = actor.access_key_id;
      break;
    }
    case IdentityKind::anonymous:
    case IdentityKind::service:
      break;
  }
  return c;
}

// Allow-list evaluation: an identity-policy grant or a resource-policy grant
// suffices.
bool permitted(const Caller& c, std::string_view permission, const std::string& resource_arn,
               const PolicyDoc* resource_policy = nullptr) {
  if (c.kind == IdentityKind::service) return false;
  if (c.kind == IdentityKind::anonymous) {
    return resource_policy && grants(*resource_policy, permission, "", "");
  }
  if (c.principal->allows(permission, resource_arn)) return true;
  return resource_policy &&
         grants(*resource_policy, permission, c.principal->arn.render(), c.account_id);
}

const std::string& need(const ControlAction& a, const std::string& key) {
  const auto it = a.params.find(key);
  if (it == a.params.end()) {
    throw ValidationError("action." + key,
                          std::string(to_string(a.type)) + " requires parameter '" + key + "'");
  }
  return it->second;
}

std::optional<std::string> opt(const ControlAction& a, const std::string& key) {
  const auto it = a.params.find(key);
  if (it == a.params.end()) return std::nullopt;
  return it->second;
}

int need_int(const ControlAction& a, const std::string& key) {
  const std::string& v = need(a, key);
  try {
    std::size_t used = 0;
    const int n = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ValidationError("action." + key, "expected an integer, got '" + v + "'");
  }
}

// Account that owns IAM entities named by an action: explicit "account"
// parameter, else the caller's, else the home account.
const Account& target_account(const Environment& env, const ControlAction& a, const Caller& c,
                              const char* param = "account") {
  if (auto alias = opt(a, param)) {
    const Account* acct = env.account(*alias);
    if (!acct) throw UnknownResourceError(std::string("action.") + param, "unknown account " + *alias);
    return *acct;
  }
  if (!c.account_id.empty()) return *env.account(c.account_id);
  const Account* home = env.home_account();
  if (!home) throw UnknownResourceError("account", "environment has no accounts");
  return *home;
}

const IamPrincipal& need_user(const Account& acct, const std::string& name) {
  const auto it = acct.users.find(name);
  if (it == acct.users.end()) {
    throw UnknownResourceError("action.userName", "no user '" + name + "' in account " + acct.id);
  }
  return it->second;
}

const IamPrincipal& need_role(const Account& acct, const std::string& name) {
  const auto it = acct.roles.find(name);
  if (it == acct.roles.end()) {
    throw UnknownResourceError("action.roleName", "no role '" + name + "' in account " + acct.id);
  }
  return it->second;
}

const S3Bucket& need_bucket(const Environment& env, const std::string& name) {
  const S3Bucket* b = env.bucket(name);
  if (!b) throw UnknownResourceError("action.bucketName", "no bucket '" + name + "'");
  return *b;
}

const Ec2Instance& need_instance(const Environment& env, const std::string& id) {
  const Ec2Instance* i = env.instance(id);
  if (!i) throw UnknownResourceError("action.instanceId", "no instance '" + id + "'");
  return *i;
}

const SecurityGroup& need_group(const Environment& env, const std::string& id) {
  const SecurityGroup* g = env.security_group(id);
  if (!g) throw UnknownResourceError("action.groupId", "no security group '" + id + "'");
  return *g;
}

std::string render_policy(const PolicyDoc& doc) { return aws_policy_document(doc).dump(); }

std::map<std::string, std::string> parse_tags(const std::string& text) {
  // "k=v;k2=v2"
  std::map<std::string, std::string> tags;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find(';', pos), text.size());
    const std::string item = text.substr(pos, end - pos);
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ValidationError("action.tags", "expected key=value, got '" + item + "'");
      }
      tags[item.substr(0, eq)] = item.substr(eq + 1);
    }
    pos = end + 1;
  }
  return tags;
}

// Outcome of planning an action: what to record, and a commit step that is
// run only when the call is authorized.
struct Plan {
  telemetry::FieldMap request;
  std::optional<std::string> denial;  // error code
  std::function<telemetry::FieldMap(Environment&)> commit;
};

constexpr const char* kAccessDenied = "AccessDenied";

Plan plan_action(const Environment& env, const ControlAction& a, const Caller& c, Timestamp at) {
  Plan p;
  const auto deny_unless = [&](bool ok, const char* code = kAccessDenied) {
    if (!ok && !p.denial) p.denial = code;
  };
  const std::string permission(action_info(a.type).permission);

  switch (a.type) {
    case A::ConsoleLogin: {
      const Account& acct = target_account(env, a, c);
      const IamPrincipal& user = need_user(acct, need(a, "userName"));
      p.request = {{"userName", user.name()}};
      deny_unless(user.password_digest && *user.password_digest == password_digest(need(a, "password")),
                  "FailedAuthentication");
      p.commit = [](Environment&) { return telemetry::FieldMap{{"ConsoleLogin", "Success"}}; };
      break;
    }
    case A::AssumeRole: {
      const Account& acct = target_account(env, a, c, "roleAccount");
      const IamPrincipal& role = need_role(acct, need(a, "roleName"));
      const std::string session = need(a, "roleSessionName");
      p.request = {{"roleArn", role.arn.render()}, {"roleSessionName", session}};
      bool trusted = false;
      if (c.principal) trusted = env.has_trust_edge(c.principal->arn, role.arn);
      if (c.kind == IdentityKind::service && role.trust_policy) {
        for (const auto& s : role.trust_policy->statements) {
          trusted = trusted || std::find(s.principals.begin(), s.principals.end(),
                                         need(a, "servicePrincipal")) != s.principals.end();
        }
        p.request["servicePrincipal"] = need(a, "servicePrincipal");
      }
      deny_unless(trusted);
      const std::string key = new_key_id(env, "ASIA");
      const Arn role_arn = role.arn;
      p.commit = [=](Environment& e) {
        e.sessions.push_back(RoleSession{key, role_arn, session, at});
        return telemetry::FieldMap{
            {"accessKeyId", key},
            {"assumedRoleArn",
             Arn::assumed_role(role_arn.account_id, role_arn.resource_name(), session).render()}};
      };
      break;
    }
    case A::GetCallerIdentity: {
      deny_unless(c.kind == IdentityKind::iam_user || c.kind == IdentityKind::assumed_role);
      const std::string arn = c.identity.arn ? c.identity.arn->render() : "";
      const std::string account = c.account_id;
      p.commit = [=](Environment&) { return telemetry::FieldMap{{"account", account}, {"arn", arn}}; };
      break;
    }
    case A::CreateUser: {
      const Account& acct = target_account(env, a, c);
      const std::string name = need(a, "userName");
      const Arn arn = Arn::iam_user(acct.id, name);
      p.request = {{"userName", name}};
      deny_unless(permitted(c, permission, arn.render()));
      if (acct.users.count(name)) deny_unless(false, "EntityAlreadyExists");
      const std::string account_id = acct.id;
      p.commit = [=](Environment& e) {
        IamPrincipal user;
        user.arn = arn;
        user.kind = PrincipalKind::user;
        user.created_at = at;
        e.accounts.at(account_id).users.emplace(name, std::move(user));
        return telemetry::FieldMap{{"userArn", arn.render()}};
      };
      break;
    }
    case A::CreateAccessKey: {
      const Account& acct = target_account(env, a, c);
      std::string name;
      if (auto n = opt(a, "userName")) name = *n;
      else if (c.kind == IdentityKind::iam_user) name = c.principal->name();
      else throw ValidationError("action.userName", "CreateAccessKey requires parameter 'userName'");
      const IamPrincipal& user = need_user(acct, name);
      p.request = {{"userName", name}};
      deny_unless(permitted(c, permission, user.arn.render()));
      const std::string key = new_key_id(env, "AKIA");
      const Arn arn = user.arn;
      p.commit = [=](Environment& e) {
        e.principal(arn)->access_keys.push_back(AccessKey{key, at, true});
        return telemetry::FieldMap{{"accessKeyId", key}, {"userName", name}, {"status", "Active"}};
      };
      break;
    }
    case A::UpdateLoginProfile: {
      const Account& acct = target_account(env, a, c);
      const IamPrincipal& user = need_user(acct, need(a, "userName"));
      p.request = {{"userName", user.name()}, {"passwordResetRequired", "false"}};
      deny_unless(permitted(c, permission, user.arn.render()));
      const std::string digest = password_digest(need(a, "password"));
      const Arn arn = user.arn;
      p.commit = [=](Environment& e) {
        e.principal(arn)->password_digest = digest;
        return telemetry::FieldMap{};
      };
      break;
    }
    case A::AttachUserPolicy:
    case A::AttachRolePolicy: {
      const bool for_user = a.type == A::AttachUserPolicy;
      const Account& acct = target_account(env, a, c);
      const IamPrincipal& target = for_user ? need_user(acct, need(a, "userName"))
                                            : need_role(acct, need(a, "roleName"));
      const std::string policy_name = need(a, "policyName");
      auto policy = managed_policy(policy_name);
      if (!policy) throw UnknownResourceError("action.policyName", "no managed policy '" + policy_name + "'");
      p.request = {{for_user ? "userName" : "roleName", target.name()},
                   {"policyArn", "arn:aws:iam::aws:policy/" + policy_name}};
      deny_unless(permitted(c, permission, target.arn.render()));
      const Arn arn = target.arn;
      p.commit = [=](Environment& e) {
        auto& attached = e.principal(arn)->attached_policies;
        if (std::find(attached.begin(), attached.end(), *policy) == attached.end()) {
          attached.push_back(*policy);
        }
        return telemetry::FieldMap{};
      };
      break;
    }
    case A::ListUsers:
    case A::ListRoles:
    case A::GetAccountAuthorizationDetails:
    case A::ListBuckets:
    case A::DescribeInstances:
    case A::DescribeSecurityGroups: {
      deny_unless(permitted(c, permission, "*"));
      p.commit = [](Environment&) { return telemetry::FieldMap{}; };
      break;
    }
    case A::ListObjects:
    case A::ListObjectsV2:
    case A::GetBucketPolicy: {
      const S3Bucket& b = need_bucket(env, need(a, "bucketName"));
      p.request = {{"bucketName", b.name}};
      deny_unless(permitted(c, permission, b.arn.render(), &b.policy));
      const auto count = std::to_string(b.objects.size());
      const bool is_list = a.type != A::GetBucketPolicy;
      p.commit = [=](Environment&) {
        return is_list ? telemetry::FieldMap{{"keyCount", count}} : telemetry::FieldMap{};
      };
      break;
    }
    case A::GetObject:
    case A::SelectObjectContent: {
      const S3Bucket& b = need_bucket(env, need(a, "bucketName"));
      const std::string key = need(a, "key");
      const S3Object* obj = b.object(key);
      if (!obj) throw UnknownResourceError("action.key", "no object '" + key + "' in bucket " + b.name);
      p.request = {{"bucketName", b.name}, {"key", key}};
      deny_unless(permitted(c, permission, b.arn.render(), &b.policy));
      const auto bytes = std::to_string(obj->size);
      p.commit = [=](Environment&) { return telemetry::FieldMap{{"bytesTransferredOut", bytes}}; };
      break;
    }
    case A::PutObject: {
      const S3Bucket& b = need_bucket(env, need(a, "bucketName"));
      const std::string key = need(a, "key");
      const std::int64_t size = opt(a, "size") ? need_int(a, "size") : 1024;
      p.request = {{"bucketName", b.name}, {"key", key}};
      deny_unless(permitted(c, permission, b.arn.render(), &b.policy));
      const std::string name = b.name;
      p.commit = [=](Environment& e) {
        auto& objects = e.bucket(name)->objects;
        const auto it = std::find_if(objects.begin(), objects.end(),
                                     [&](const S3Object& o) { return o.key == key; });
        if (it != objects.end()) *it = S3Object{key, size, at};
        else objects.push_back(S3Object{key, size, at});
        return telemetry::FieldMap{{"bytesTransferredIn", std::to_string(size)}};
      };
      break;
    }
    case A::PutBucketPolicy: {
      const S3Bucket& b = need_bucket(env, need(a, "bucketName"));
      std::string grant = need(a, "grant");
      if (grant.rfind("account:", 0) == 0) {
        // Accept an alias in place of the account id.
        if (const Account* acct = env.account(grant.substr(8))) grant = "account:" + acct->id;
      }
      const PolicyDoc policy = bucket_policy_for_grant(b.arn.render(), grant);
      p.request = {{"bucketName", b.name}, {"bucketPolicy", render_policy(policy)}};
      deny_unless(permitted(c, permission, b.arn.render()));
      const std::string name = b.name;
      p.commit = [=](Environment& e) {
        S3Bucket* target = e.bucket(name);
        target->policy = policy;
        target->is_public = grants_anonymous_read(policy);
        return telemetry::FieldMap{};
      };
      break;
    }
    case A::PutBucketTagging: {
      const S3Bucket& b = need_bucket(env, need(a, "bucketName"));
      const auto tags = parse_tags(need(a, "tags"));
      p.request = {{"bucketName", b.name}, {"tagging", need(a, "tags")}};
      deny_unless(permitted(c, permission, b.arn.render()));
      const std::string name = b.name;
      p.commit = [=](Environment& e) {
        for (const auto& [k, v] : tags) e.bucket(name)->tags[k] = v;
        return telemetry::FieldMap{};
      };
      break;
    }
    case A::StartInstances:
    case A::StopInstances:
    case A::TerminateInstances: {
      const Ec2Instance& inst = need_instance(env, need(a, "instanceId"));
      const Account* owner = env.owner_of_instance(inst.instance_id);
      p.request = {{"instanceId", inst.instance_id}};
      deny_unless(permitted(c, permission, Arn::instance(inst.region, owner->id, inst.instance_id).render()));
      const InstanceState next = a.type == A::StartInstances  ? InstanceState::running
                                 : a.type == A::StopInstances ? InstanceState::stopped
                                                              : InstanceState::terminated;
      deny_unless(can_transition(inst.state, next), "IncorrectInstanceState");
      const std::string id = inst.instance_id;
      const std::string previous(to_string(inst.state));
      p.commit = [=](Environment& e) {
        e.instance(id)->state = next;
        return telemetry::FieldMap{{"previousState", previous},
                                   {"currentState", std::string(to_string(next))}};
      };
      break;
    }
    case A::AuthorizeSecurityGroupIngress:
    case A::ModifySecurityGroupRules: {
      const SecurityGroup& g = need_group(env, need(a, "groupId"));
      const Account* owner = env.owner_of_security_group(g.group_id);
      const int port = need_int(a, "port");
      const std::string protocol = opt(a, "protocol").value_or("tcp");
      const std::string cidr = need(a, "cidr");
      p.request = {{"groupId", g.group_id}, {"ipProtocol", protocol},
                   {"fromPort", std::to_string(port)}, {"toPort", std::to_string(port)},
                   {"cidrIp", cidr}};
      if (auto d = opt(a, "description")) p.request["description"] = *d;
      deny_unless(permitted(c, permission, Arn::security_group(g.region, owner->id, g.group_id).render()));
      const std::string id = g.group_id;
      p.commit = [=](Environment& e) {
        auto& rules = e.security_group(id)->ingress;
        const IngressRule rule{protocol, port, port, cidr};
        if (std::find(rules.begin(), rules.end(), rule) == rules.end()) rules.push_back(rule);
        return telemetry::FieldMap{{"return", "true"}};
      };
      break;
    }
    case A::SendCommand:
    case A::CreateAssociation: {
      const Ec2Instance& inst = need_instance(env, need(a, "instanceId"));
      const Account* owner = env.owner_of_instance(inst.instance_id);
      p.request = {{"instanceId", inst.instance_id},
                   {"documentName", opt(a, "documentName").value_or("AWS-RunShellScript")},
                   {"commands", need(a, "commands")}};
      if (auto c = opt(a, "comment")) p.request["comment"] = *c;
      deny_unless(permitted(c, permission, Arn::instance(inst.region, owner->id, inst.instance_id).render()));
      deny_unless(inst.ssm_managed && inst.state == InstanceState::running, "InvalidInstanceId");
      const std::string handle = uuid_from(mix64(env.seed ^ 0xc0ffee ^ env.sequence), mix64(env.sequence));
      const bool is_command = a.type == A::SendCommand;
      p.commit = [=](Environment&) {
        return telemetry::FieldMap{{is_command ? "commandId" : "associationId", handle}};
      };
      break;
    }
  }
  return p;
}

}  // namespace

const ActionInfo& action_info(ActionType type) {
  for (const auto& row : table()) {
    if (row.type == type) return row;
  }
  throw ValidationError("action", "unregistered action type");
}

std::span<const ActionInfo> all_actions() { return table(); }

ActionType action_type_from_string(std::string_view name) {
  for (const auto& row : table()) {
    if (row.name == name) return row.type;
  }
  throw ValidationError("action", "unknown action '" + std::string(name) + "'");
}

std::string_view to_string(ActionType type) { return action_info(type).name; }

std::string_view service_of(ActionType type) {
  const auto src = action_info(type).event_source;
  return src.substr(0, src.find('.'));
}

CloudEvent apply_control_action(Environment& env, const ControlAction& action, const Actor& actor,
                                Timestamp at) {
  if (at < env.clock) {
    throw ValidationError("at", "action time " + format_rfc3339(at) + " precedes clock " +
                                    format_rfc3339(env.clock));
  }
  const ActionInfo& info = action_info(action.type);
  for (auto key : info.required_params) need(action, std::string(key));

  const Caller caller = resolve_caller(env, actor);
  Plan plan = plan_action(env, action, caller, at);
  if (!caller.authenticated) plan.denial = "InvalidClientTokenId";

  CloudEvent e;
  e.event_id = event_id(env);
  e.event_time = at;
  e.event_source = std::string(info.event_source);
  e.event_name = std::string(info.name);
  e.region = info.global ? "us-east-1" : opt(action, "region").value_or(env.region);
  e.source_ip = actor.source_ip;
  e.user_identity = caller.identity;
  if (action.type == A::ConsoleLogin) {
    const Account& acct = target_account(env, action, caller);
    const IamPrincipal& user = need_user(acct, need(action, "userName"));
    e.user_identity = {IdentityKind::iam_user, user.arn, acct.id, std::nullopt};
  }
  e.request_parameters = std::move(plan.request);

  // Everything above is side-effect free; mutate only from here on.
  if (plan.denial) {
    e.error_code = plan.denial;
    if (action.type == A::ConsoleLogin) e.response_elements = {{"ConsoleLogin", "Failure"}};
  } else {
    e.response_elements = plan.commit(env);
  }
  env.clock = at;
  ++env.sequence;
  return e;
}

}  // namespace irbench::cloud
