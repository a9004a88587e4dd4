// SPDX-License-Identifier: Apache-2.0
#include "irbench/cloud/provision.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "irbench/core/errors.hpp"
#include "irbench/core/rng.hpp"

namespace irbench::cloud {
namespace {

constexpr std::array<std::string_view, 24> kFirstNames = {
    "maria", "james", "wei", "fatima", "olivia", "noah", "priya", "lucas",
    "sofia", "ahmed", "emma", "kenji", "chloe", "diego", "hannah", "omar",
    "grace", "mateo", "aisha", "liam", "yuki", "nina", "tomas", "leila"};
constexpr std::array<std::string_view, 20> kLastNames = {
    "gonzalez", "chen", "okafor", "schmidt", "patel", "novak", "silva", "kim",
    "haddad", "larsen", "moreau", "ito", "walsh", "rossi", "kowalski", "nguyen",
    "adeyemi", "fischer", "brennan", "costa"};
constexpr std::array<std::string_view, 14> kTeams = {
    "analytics", "billing", "platform", "payments", "search", "identity", "ledger",
    "reporting", "ingest", "catalog", "fulfil", "media", "growth", "support"};
constexpr std::array<std::string_view, 10> kPurposes = {
    "etl", "batch", "reader", "writer", "worker", "sync", "export", "audit", "scheduler",
    "gateway"};
constexpr std::array<std::string_view, 10> kOrgs = {
    "northwind", "contoso", "fabrikam", "tailspin", "wingtip", "adatum", "litware",
    "proseware", "lucerne", "margie"};
constexpr std::array<std::string_view, 10> kBucketPurposes = {
    "logs", "backups", "assets", "exports", "archive", "uploads", "reports", "datalake",
    "artifacts", "staging"};
constexpr std::array<std::string_view, 8> kObjectWords = {
    "summary", "invoice", "snapshot", "events", "manifest", "extract", "ledger", "index"};
constexpr std::array<std::string_view, 5> kExtensions = {"csv", "json", "parquet", "gz", "txt"};

template <std::size_t N>
std::string_view pick(Rng& rng, const std::array<std::string_view, N>& words) {
  return words[rng.below(N)];
}

// Draws until `make` yields a name not yet in `taken`.
template <typename F>
std::string fresh(std::set<std::string>& taken, F make) {
  for (;;) {
    std::string name = make();
    if (taken.insert(name).second) return name;
  }
}

void check_count(const std::optional<int>& v, const char* field) {
  if (v && *v < 0) throw ValidationError(std::string("filler.") + field, "count must be >= 0");
}

}  // namespace

std::string PrincipalName::render() const {
  return std::string(kind == PrincipalKind::user ? "user:" : "role:") + account + "/" + name;
}

PrincipalName PrincipalName::parse(const std::string& text) {
  PrincipalName p;
  const auto colon = text.find(':');
  const auto slash = text.find('/', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || slash == std::string::npos || slash + 1 >= text.size()) {
    throw ValidationError("principal", "expected user:<account>/<name> or role:<account>/<name>, got '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  if (kind == "user") p.kind = PrincipalKind::user;
  else if (kind == "role") p.kind = PrincipalKind::role;
  else throw ValidationError("principal", "unknown principal kind '" + kind + "'");
  p.account = text.substr(colon + 1, slash - colon - 1);
  p.name = text.substr(slash + 1);
  return p;
}

ResolvedCounts default_counts(Category c) {
  switch (c) {
    case Category::brute_force: return {4, 0, 1, 3, 0, 0};
    case Category::unauthorized_access: return {2, 2, 2, 5, 0, 0};
    case Category::misconfiguration: return {2, 0, 3, 4, 2, 0};
    case Category::malicious_file_execution: return {1, 1, 0, 0, 1, 2};
  }
  return {};
}

ResolvedCounts EnvironmentSpec::counts() const {
  const ResolvedCounts d = default_counts(category);
  return {filler.users.value_or(d.users),
          filler.roles.value_or(d.roles),
          filler.buckets.value_or(d.buckets),
          filler.objects_per_bucket.value_or(d.objects_per_bucket),
          filler.security_groups.value_or(d.security_groups),
          filler.instances.value_or(d.instances)};
}

void validate(const EnvironmentSpec& spec) {
  check_count(spec.filler.users, "users");
  check_count(spec.filler.roles, "roles");
  check_count(spec.filler.buckets, "buckets");
  check_count(spec.filler.objects_per_bucket, "objects_per_bucket");
  check_count(spec.filler.security_groups, "security_groups");
  check_count(spec.filler.instances, "instances");
  if (spec.accounts.empty()) throw ValidationError("accounts", "at least one account is required");
  if (spec.region.empty()) throw ValidationError("region", "must not be empty");

  const std::set<std::string> aliases(spec.accounts.begin(), spec.accounts.end());
  if (aliases.size() != spec.accounts.size()) throw ValidationError("accounts", "duplicate alias");
  const auto known = [&](const std::string& alias, const std::string& field) {
    if (!aliases.count(alias)) throw ValidationError(field, "unknown account alias '" + alias + "'");
  };
  const auto policies_known = [](const std::vector<std::string>& names, const std::string& field) {
    for (const auto& n : names) {
      if (!managed_policy(n)) throw ValidationError(field, "unknown managed policy '" + n + "'");
    }
  };

  std::set<std::string> users, roles, buckets, groups, instances;
  for (const auto& u : spec.users) {
    known(u.account, "users." + u.name);
    policies_known(u.policies, "users." + u.name);
    if (u.name.empty() || !users.insert(u.account + "/" + u.name).second) {
      throw ValidationError("users", "empty or duplicate user '" + u.name + "'");
    }
    if (u.access_keys < 0) throw ValidationError("users." + u.name, "access_keys must be >= 0");
  }
  for (const auto& r : spec.roles) {
    known(r.account, "roles." + r.name);
    policies_known(r.policies, "roles." + r.name);
    if (r.name.empty() || !roles.insert(r.account + "/" + r.name).second) {
      throw ValidationError("roles", "empty or duplicate role '" + r.name + "'");
    }
  }
  for (const auto& r : spec.roles) {
    for (const auto& t : r.trusted) {
      const auto& pool = t.kind == PrincipalKind::user ? users : roles;
      if (!pool.count(t.account + "/" + t.name)) {
        throw ValidationError("roles." + r.name + ".trusted", "unknown principal " + t.render());
      }
    }
  }
  for (const auto& b : spec.buckets) {
    known(b.account, "buckets." + b.name);
    if (b.name.empty() || !buckets.insert(b.name).second) {
      throw ValidationError("buckets", "empty or duplicate bucket '" + b.name + "'");
    }
    if (b.grant != "private" && b.grant != "public-read" && b.grant.rfind("account:", 0) != 0) {
      throw ValidationError("buckets." + b.name + ".grant", "unknown grant '" + b.grant + "'");
    }
  }
  for (const auto& g : spec.security_groups) {
    known(g.account, "security_groups." + g.group_id);
    if (g.group_id.empty() || !groups.insert(g.group_id).second) {
      throw ValidationError("security_groups", "empty or duplicate group '" + g.group_id + "'");
    }
  }
  for (const auto& i : spec.instances) {
    known(i.account, "instances." + i.instance_id);
    if (i.instance_id.empty() || !instances.insert(i.instance_id).second) {
      throw ValidationError("instances", "empty or duplicate instance '" + i.instance_id + "'");
    }
    if (i.profile_role && !roles.count(i.account + "/" + *i.profile_role)) {
      throw ValidationError("instances." + i.instance_id + ".profile_role",
                            "unknown role '" + *i.profile_role + "'");
    }
    for (const auto& gid : i.security_groups) {
      if (!groups.count(gid)) {
        throw ValidationError("instances." + i.instance_id + ".security_groups",
                              "unknown group '" + gid + "'");
      }
    }
  }
}

Environment provision_environment(const EnvironmentSpec& spec, std::uint64_t seed) {
  validate(spec);
  const ResolvedCounts counts = spec.counts();

  Environment env;
  env.seed = seed;
  env.region = spec.region;
  env.clock = spec.provisioned_at;
  const Timestamp t0 = spec.provisioned_at;

  Rng id_rng(mix64(seed ^ 0x01));
  Rng name_rng(mix64(seed ^ 0x02));
  Rng key_rng(mix64(seed ^ 0x03));

  std::vector<std::string> aliases = spec.accounts;
  // Cross-account trust is part of the unauthorized-access baseline.
  if (spec.category == Category::unauthorized_access && counts.roles > 1 && aliases.size() == 1) {
    aliases.push_back("secondary");
  }

  std::map<std::string, std::string> alias_to_id;
  std::set<std::string> used_ids;
  for (const auto& alias : aliases) {
    const std::string id = fresh(used_ids, [&] {
      return std::to_string(id_rng.between(100000000000LL, 999999999999LL));
    });
    alias_to_id[alias] = id;
    Account acct;
    acct.id = id;
    acct.alias = alias;
    acct.cloudtrail_enabled = spec.cloudtrail_enabled;
    env.accounts.emplace(id, std::move(acct));
  }
  const auto acct_of = [&](const std::string& alias) -> Account& {
    return env.accounts.at(alias_to_id.at(alias));
  };
  const std::string& home = alias_to_id.at(aliases.front());

  std::set<std::string> taken_keys;
  const auto new_key = [&](std::string_view prefix) {
    return fresh(taken_keys, [&] { return std::string(prefix) + key_rng.chars("ABCDEFGHIJKLMNOPQRSTUVWXYZ234567", 16); });
  };
  const auto policies = [](const std::vector<std::string>& names) {
    std::vector<PolicyDoc> out;
    for (const auto& n : names) out.push_back(*managed_policy(n));
    return out;
  };

  // Declared resources.
  for (const auto& u : spec.users) {
    IamPrincipal p;
    p.arn = Arn::iam_user(alias_to_id.at(u.account), u.name);
    p.kind = PrincipalKind::user;
    p.created_at = t0;
    p.attached_policies = policies(u.policies);
    if (u.password) p.password_digest = password_digest(*u.password);
    for (int k = 0; k < u.access_keys; ++k) p.access_keys.push_back({new_key("AKIA"), t0, true});
    p.tags = u.tags;
    acct_of(u.account).users.emplace(u.name, std::move(p));
  }
  for (const auto& r : spec.roles) {
    IamPrincipal p;
    p.arn = Arn::iam_role(alias_to_id.at(r.account), r.name);
    p.kind = PrincipalKind::role;
    p.created_at = t0;
    p.attached_policies = policies(r.policies);
    PolicyDoc trust{"TrustPolicy", {}};
    PolicyStatement stmt{{"sts:AssumeRole"}, {"*"}, {}};
    for (const auto& t : r.trusted) {
      const std::string acct = alias_to_id.at(t.account);
      const Arn src = t.kind == PrincipalKind::user ? Arn::iam_user(acct, t.name) : Arn::iam_role(acct, t.name);
      stmt.principals.push_back(src.render());
      env.trust_edges.push_back({src, p.arn});
    }
    for (const auto& svc : r.trusted_services) stmt.principals.push_back(svc);
    trust.statements.push_back(std::move(stmt));
    p.trust_policy = std::move(trust);
    acct_of(r.account).roles.emplace(r.name, std::move(p));
  }
  for (const auto& b : spec.buckets) {
    S3Bucket bucket;
    bucket.name = b.name;
    bucket.arn = Arn::bucket(alias_to_id.at(b.account), b.name);
    bucket.created_at = t0;
    std::string grant = b.grant;
    if (grant.rfind("account:", 0) == 0 && alias_to_id.count(grant.substr(8))) {
      grant = "account:" + alias_to_id.at(grant.substr(8));
    }
    bucket.policy = bucket_policy_for_grant(bucket.arn.render(), grant);
    bucket.is_public = grants_anonymous_read(bucket.policy);
    for (const auto& o : b.objects) bucket.objects.push_back({o.key, o.size, t0});
    bucket.tags = b.tags;
    acct_of(b.account).buckets.emplace(b.name, std::move(bucket));
  }
  for (const auto& g : spec.security_groups) {
    acct_of(g.account).security_groups.emplace(
        g.group_id, SecurityGroup{g.group_id, g.name, spec.region, g.ingress});
  }
  for (const auto& i : spec.instances) {
    Ec2Instance inst;
    inst.instance_id = i.instance_id;
    inst.name = i.name;
    inst.region = spec.region;
    inst.security_groups = i.security_groups;
    inst.state = i.state;
    inst.ssm_managed = i.ssm_managed;
    if (i.profile_role) {
      inst.profile = Arn::iam_role(alias_to_id.at(i.account), *i.profile_role);
      inst.profile_session_key = new_key("ASIA");
      env.sessions.push_back({*inst.profile_session_key, *inst.profile, i.instance_id, t0});
    }
    acct_of(i.account).instances.emplace(i.instance_id, std::move(inst));
  }

  // Filler resources, named from the seed.
  std::set<std::string> taken_names;
  for (const auto& [id, acct] : env.accounts) {
    for (const auto& [n, u] : acct.users) taken_names.insert(n);
    for (const auto& [n, r] : acct.roles) taken_names.insert(n);
    for (const auto& [n, b] : acct.buckets) taken_names.insert(n);
    for (const auto& [n, i] : acct.instances) taken_names.insert(n);
    for (const auto& [n, g] : acct.security_groups) taken_names.insert(n);
  }
  Account& home_acct = env.accounts.at(home);

  for (int k = 0; k < counts.users; ++k) {
    const std::string name = fresh(taken_names, [&] {
      return std::string(pick(name_rng, kFirstNames)) + "." + std::string(pick(name_rng, kLastNames));
    });
    IamPrincipal p;
    p.arn = Arn::iam_user(home, name);
    p.created_at = t0;
    p.attached_policies = policies({k == 0 ? "ReadOnlyAccess" : "AmazonS3ReadOnlyAccess"});
    p.access_keys.push_back({new_key("AKIA"), t0, true});
    p.password_digest = password_digest(name_rng.hex(12));
    home_acct.users.emplace(name, std::move(p));
  }

  std::vector<Arn> filler_roles;
  for (int k = 0; k < counts.roles; ++k) {
    // With a second account, the last filler role lives there and trusts the first.
    const bool remote = aliases.size() > 1 && counts.roles > 1 && k == counts.roles - 1;
    const std::string acct_id = remote ? alias_to_id.at(aliases[1]) : home;
    const std::string name = fresh(taken_names, [&] {
      return std::string(pick(name_rng, kTeams)) + "-" + std::string(pick(name_rng, kPurposes)) + "-role";
    });
    IamPrincipal p;
    p.arn = Arn::iam_role(acct_id, name);
    p.kind = PrincipalKind::role;
    p.created_at = t0;
    p.attached_policies = policies({"AmazonS3ReadOnlyAccess"});
    PolicyStatement stmt{{"sts:AssumeRole"}, {"*"}, {}};
    if (remote && !filler_roles.empty()) {
      stmt.principals.push_back(filler_roles.front().render());
      env.trust_edges.push_back({filler_roles.front(), p.arn});
    } else {
      stmt.principals.push_back("ec2.amazonaws.com");
    }
    p.trust_policy = PolicyDoc{"TrustPolicy", {std::move(stmt)}};
    filler_roles.push_back(p.arn);
    env.accounts.at(acct_id).roles.emplace(name, std::move(p));
  }

  for (int k = 0; k < counts.buckets; ++k) {
    const std::string name = fresh(taken_names, [&] {
      return std::string(pick(name_rng, kOrgs)) + "-" + std::string(pick(name_rng, kBucketPurposes)) +
             "-" + name_rng.hex(6);
    });
    S3Bucket b;
    b.name = name;
    b.arn = Arn::bucket(home, name);
    b.created_at = t0;
    b.policy = bucket_policy_for_grant(b.arn.render(), "private");
    for (int o = 0; o < counts.objects_per_bucket; ++o) {
      const std::string key = std::string(pick(name_rng, kBucketPurposes)) + "/" +
                              std::string(pick(name_rng, kObjectWords)) + "-" +
                              std::to_string(o + 1) + "." + std::string(pick(name_rng, kExtensions));
      if (!b.object(key)) b.objects.push_back({key, name_rng.between(2048, 50'000'000), t0});
    }
    home_acct.buckets.emplace(name, std::move(b));
  }

  std::vector<std::string> filler_groups;
  for (int k = 0; k < counts.security_groups; ++k) {
    const std::string gid = fresh(taken_names, [&] { return "sg-" + name_rng.hex(17); });
    const std::string gname = std::string(pick(name_rng, kTeams)) + "-sg";
    home_acct.security_groups.emplace(
        gid, SecurityGroup{gid, gname, spec.region, {{"tcp", 443, 443, "10.0.0.0/8"}}});
    filler_groups.push_back(gid);
  }

  for (int k = 0; k < counts.instances; ++k) {
    const std::string iid = fresh(taken_names, [&] { return "i-" + name_rng.hex(17); });
    Ec2Instance inst;
    inst.instance_id = iid;
    inst.name = std::string(pick(name_rng, kTeams)) + "-" + std::string(pick(name_rng, kPurposes)) +
                "-" + std::to_string(k + 1);
    inst.region = spec.region;
    inst.state = InstanceState::running;
    inst.ssm_managed = true;
    if (!filler_groups.empty()) inst.security_groups.push_back(filler_groups[k % filler_groups.size()]);
    const auto local_role = std::find_if(filler_roles.begin(), filler_roles.end(),
                                         [&](const Arn& r) { return r.account_id == home; });
    if (local_role != filler_roles.end()) {
      inst.profile = *local_role;
      inst.profile_session_key = new_key("ASIA");
      env.sessions.push_back({*inst.profile_session_key, *inst.profile, iid, t0});
    }
    home_acct.instances.emplace(iid, std::move(inst));
  }

  return env;
}

}  // namespace irbench::cloud
