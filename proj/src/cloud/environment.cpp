// SPDX-License-Identifier: Apache-2.0
#include "irbench/cloud/environment.hpp"

#include <algorithm>
#include <cstdio>

#include "irbench/core/errors.hpp"
#include "irbench/core/rng.hpp"

namespace irbench::cloud {

bool IamPrincipal::allows(std::string_view action, std::string_view resource_arn) const {
  return std::any_of(attached_policies.begin(), attached_policies.end(),
                     [&](const PolicyDoc& p) { return cloud::allows(p, action, resource_arn); });
}

const S3Object* S3Bucket::object(std::string_view key) const {
  const auto it = std::find_if(objects.begin(), objects.end(),
                               [&](const S3Object& o) { return o.key == key; });
  return it == objects.end() ? nullptr : &*it;
}

std::string_view to_string(InstanceState s) {
  switch (s) {
    case InstanceState::pending: return "pending";
    case InstanceState::running: return "running";
    case InstanceState::stopped: return "stopped";
    case InstanceState::terminated: return "terminated";
  }
  return "pending";
}

InstanceState instance_state_from_string(std::string_view s) {
  if (s == "pending") return InstanceState::pending;
  if (s == "running") return InstanceState::running;
  if (s == "stopped") return InstanceState::stopped;
  if (s == "terminated") return InstanceState::terminated;
  throw ParseError("unknown instance state '" + std::string(s) + "'");
}

bool can_transition(InstanceState from, InstanceState to) {
  using S = InstanceState;
  switch (from) {
    case S::pending: return to == S::running || to == S::terminated;
    case S::running: return to == S::stopped || to == S::terminated;
    case S::stopped: return to == S::running || to == S::terminated;
    case S::terminated: return false;
  }
  return false;
}

Account* Environment::account(std::string_view id_or_alias) {
  return const_cast<Account*>(std::as_const(*this).account(id_or_alias));
}

const Account* Environment::account(std::string_view id_or_alias) const {
  if (const auto it = accounts.find(std::string(id_or_alias)); it != accounts.end()) {
    return &it->second;
  }
  for (const auto& [id, acct] : accounts) {
    if (acct.alias == id_or_alias) return &acct;
  }
  return nullptr;
}

const Account& Environment::account_by_alias(std::string_view alias) const {
  const Account* a = account(alias);
  if (!a) throw ValidationError("account", "unknown account '" + std::string(alias) + "'");
  return *a;
}

const Account* Environment::home_account() const {
  if (const Account* a = account("primary")) return a;
  return accounts.empty() ? nullptr : &accounts.begin()->second;
}

const IamPrincipal* Environment::principal(const Arn& arn) const {
  const Account* acct = account(arn.account_id);
  if (!acct || arn.service != "iam" || arn.resource_path.size() != 2) return nullptr;
  const std::string& type = arn.resource_path[0];
  if (type != "user" && type != "role") return nullptr;
  const auto& table = type == "user" ? acct->users : acct->roles;
  const auto it = table.find(arn.resource_path[1]);
  return it == table.end() ? nullptr : &it->second;
}

IamPrincipal* Environment::principal(const Arn& arn) {
  return const_cast<IamPrincipal*>(std::as_const(*this).principal(arn));
}

const Account* Environment::owner_of_bucket(std::string_view name) const {
  for (const auto& [id, acct] : accounts) {
    if (acct.buckets.count(std::string(name))) return &acct;
  }
  return nullptr;
}

const Account* Environment::owner_of_instance(std::string_view iid) const {
  for (const auto& [id, acct] : accounts) {
    if (acct.instances.count(std::string(iid))) return &acct;
  }
  return nullptr;
}

const Account* Environment::owner_of_security_group(std::string_view gid) const {
  for (const auto& [id, acct] : accounts) {
    if (acct.security_groups.count(std::string(gid))) return &acct;
  }
  return nullptr;
}

const S3Bucket* Environment::bucket(std::string_view name) const {
  const Account* a = owner_of_bucket(name);
  return a ? &a->buckets.at(std::string(name)) : nullptr;
}
S3Bucket* Environment::bucket(std::string_view name) {
  return const_cast<S3Bucket*>(std::as_const(*this).bucket(name));
}

const Ec2Instance* Environment::instance(std::string_view iid) const {
  const Account* a = owner_of_instance(iid);
  return a ? &a->instances.at(std::string(iid)) : nullptr;
}
Ec2Instance* Environment::instance(std::string_view iid) {
  return const_cast<Ec2Instance*>(std::as_const(*this).instance(iid));
}

const SecurityGroup* Environment::security_group(std::string_view gid) const {
  const Account* a = owner_of_security_group(gid);
  return a ? &a->security_groups.at(std::string(gid)) : nullptr;
}
SecurityGroup* Environment::security_group(std::string_view gid) {
  return const_cast<SecurityGroup*>(std::as_const(*this).security_group(gid));
}

const RoleSession* Environment::session(std::string_view access_key_id) const {
  const auto it = std::find_if(sessions.begin(), sessions.end(), [&](const RoleSession& s) {
    return s.access_key_id == access_key_id;
  });
  return it == sessions.end() ? nullptr : &*it;
}

const IamPrincipal* Environment::key_owner(std::string_view access_key_id) const {
  for (const auto& [id, acct] : accounts) {
    for (const auto& [name, user] : acct.users) {
      for (const auto& k : user.access_keys) {
        if (k.id == access_key_id) return &user;
      }
    }
  }
  return nullptr;
}

bool Environment::has_trust_edge(const Arn& source, const Arn& target) const {
  return std::any_of(trust_edges.begin(), trust_edges.end(), [&](const TrustEdge& e) {
    return e.source == source && e.target == target;
  });
}

bool Environment::access_key_exists(std::string_view id) const {
  return key_owner(id) != nullptr || session(id) != nullptr;
}

std::optional<Resource> lookup_resource(const Environment& env, const Arn& arn) {
  const Account* acct = env.account(arn.account_id);
  if (!acct || acct->id != arn.account_id) return std::nullopt;
  const auto& path = arn.resource_path;
  if (arn.service == "iam") {
    if (const IamPrincipal* p = env.principal(arn)) return Resource{p};
    return std::nullopt;
  }
  if (arn.service == "s3" && path.size() == 1) {
    const auto it = acct->buckets.find(path[0]);
    if (it != acct->buckets.end()) return Resource{&it->second};
    return std::nullopt;
  }
  if (arn.service == "ec2" && path.size() == 2) {
    if (path[0] == "instance") {
      const auto it = acct->instances.find(path[1]);
      if (it != acct->instances.end()) return Resource{&it->second};
    } else if (path[0] == "security-group") {
      const auto it = acct->security_groups.find(path[1]);
      if (it != acct->security_groups.end()) return Resource{&it->second};
    }
  }
  return std::nullopt;
}

std::optional<Resource> lookup_resource(const Environment& env, std::string_view arn_text) {
  return lookup_resource(env, Arn::parse(arn_text));
}

std::vector<std::string> dangling_references(const Environment& env) {
  std::vector<std::string> out;
  for (const auto& e : env.trust_edges) {
    if (!env.principal(e.source)) out.push_back("trust edge source " + e.source.render());
    const IamPrincipal* target = env.principal(e.target);
    if (!target || target->kind != PrincipalKind::role) {
      out.push_back("trust edge target " + e.target.render());
    }
  }
  for (const auto& [id, acct] : env.accounts) {
    for (const auto& [iid, inst] : acct.instances) {
      if (inst.profile) {
        const IamPrincipal* role = env.principal(*inst.profile);
        if (!role || role->kind != PrincipalKind::role) {
          out.push_back("instance profile of " + iid);
        }
      }
      for (const auto& gid : inst.security_groups) {
        if (!env.security_group(gid)) out.push_back("security group " + gid + " of " + iid);
      }
    }
  }
  for (const auto& s : env.sessions) {
    if (!env.principal(s.role)) out.push_back("session role " + s.role.render());
  }
  return out;
}

std::string password_digest(std::string_view password) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(mix64(stable_hash(password))));
  return buf;
}

}  // namespace irbench::cloud
