// SPDX-License-Identifier: Apache-2.0
#include "irbench/cloud/serialize.hpp"

#include "irbench/core/errors.hpp"

namespace irbench::cloud {
namespace {

ojson strings(const std::vector<std::string>& v) { return ojson(v); }

ojson ingress_to_json(const std::vector<IngressRule>& rules) {
  ojson out = ojson::array();
  for (const auto& r : rules) {
    out.push_back({{"protocol", r.protocol}, {"from_port", r.from_port}, {"to_port", r.to_port},
                   {"cidr", r.cidr}});
  }
  return out;
}

std::vector<IngressRule> ingress_from_json(const ojson& arr) {
  std::vector<IngressRule> out;
  for (const auto& r : arr) {
    out.push_back({get_string(r, "protocol"), static_cast<int>(get_int(r, "from_port")),
                   static_cast<int>(get_int(r, "to_port")), get_string(r, "cidr")});
  }
  return out;
}

ojson principal_to_json(const IamPrincipal& p) {
  ojson j;
  j["arn"] = p.arn.render();
  j["kind"] = p.kind == PrincipalKind::user ? "user" : "role";
  j["created_at"] = format_rfc3339(p.created_at);
  ojson pols = ojson::array();
  for (const auto& pol : p.attached_policies) pols.push_back(policy_to_json(pol));
  j["attached_policies"] = std::move(pols);
  ojson keys = ojson::array();
  for (const auto& k : p.access_keys) {
    keys.push_back({{"id", k.id}, {"created_at", format_rfc3339(k.created_at)}, {"active", k.active}});
  }
  j["access_keys"] = std::move(keys);
  j["trust_policy"] = p.trust_policy ? policy_to_json(*p.trust_policy) : ojson(nullptr);
  j["password_digest"] = p.password_digest ? ojson(*p.password_digest) : ojson(nullptr);
  j["tags"] = string_map_to_json(p.tags);
  return j;
}

IamPrincipal principal_from_json(const ojson& j) {
  IamPrincipal p;
  p.arn = Arn::parse(get_string(j, "arn"));
  const std::string kind = get_string(j, "kind");
  if (kind != "user" && kind != "role") throw ParseError("unknown principal kind '" + kind + "'");
  p.kind = kind == "user" ? PrincipalKind::user : PrincipalKind::role;
  p.created_at = parse_rfc3339(get_string(j, "created_at"));
  for (const auto& pol : get_array(j, "attached_policies")) p.attached_policies.push_back(policy_from_json(pol));
  for (const auto& k : get_array(j, "access_keys")) {
    p.access_keys.push_back({get_string(k, "id"), parse_rfc3339(get_string(k, "created_at")), get_bool(k, "active")});
  }
  if (!field(j, "trust_policy").is_null()) p.trust_policy = policy_from_json(j.at("trust_policy"));
  p.password_digest = get_opt_string(j, "password_digest");
  p.tags = get_string_map(j, "tags");
  if (p.kind == PrincipalKind::user && p.trust_policy) {
    throw ParseError("user " + p.arn.render() + " must not carry a trust policy");
  }
  return p;
}

}  // namespace

ojson aws_policy_document(const PolicyDoc& p) {
  ojson stmts = ojson::array();
  for (const auto& s : p.statements) {
    ojson st = {{"Effect", "Allow"}};
    if (!s.principals.empty()) st["Principal"] = s.principals;
    st["Action"] = s.actions;
    st["Resource"] = s.resources;
    stmts.push_back(std::move(st));
  }
  return {{"Version", "2012-10-17"}, {"Statement", stmts}};
}

ojson policy_to_json(const PolicyDoc& p) {
  ojson stmts = ojson::array();
  for (const auto& s : p.statements) {
    stmts.push_back({{"actions", strings(s.actions)}, {"resources", strings(s.resources)},
                     {"principals", strings(s.principals)}});
  }
  return {{"name", p.name}, {"statements", stmts}};
}

PolicyDoc policy_from_json(const ojson& j) {
  PolicyDoc p;
  p.name = get_string(j, "name");
  for (const auto& s : get_array(j, "statements")) {
    p.statements.push_back({get_strings(s, "actions"), get_strings(s, "resources"), get_strings(s, "principals")});
  }
  return p;
}

ojson environment_to_json(const Environment& env) {
  ojson j;
  j["seed"] = std::to_string(env.seed);
  j["region"] = env.region;
  j["clock"] = format_rfc3339(env.clock);
  j["sequence"] = env.sequence;
  ojson accounts = ojson::array();
  for (const auto& [id, a] : env.accounts) {
    ojson aj;
    aj["id"] = a.id;
    aj["alias"] = a.alias;
    aj["cloudtrail_enabled"] = a.cloudtrail_enabled;
    ojson users = ojson::array(), roles = ojson::array();
    for (const auto& [n, u] : a.users) users.push_back(principal_to_json(u));
    for (const auto& [n, r] : a.roles) roles.push_back(principal_to_json(r));
    aj["users"] = std::move(users);
    aj["roles"] = std::move(roles);
    ojson buckets = ojson::array();
    for (const auto& [n, b] : a.buckets) {
      ojson bj;
      bj["name"] = b.name;
      bj["arn"] = b.arn.render();
      bj["created_at"] = format_rfc3339(b.created_at);
      bj["policy"] = policy_to_json(b.policy);
      bj["public"] = b.is_public;
      ojson objs = ojson::array();
      for (const auto& o : b.objects) {
        objs.push_back({{"key", o.key}, {"size", o.size}, {"last_modified", format_rfc3339(o.last_modified)}});
      }
      bj["objects"] = std::move(objs);
      bj["tags"] = string_map_to_json(b.tags);
      buckets.push_back(std::move(bj));
    }
    aj["buckets"] = std::move(buckets);
    ojson groups = ojson::array();
    for (const auto& [gid, g] : a.security_groups) {
      groups.push_back({{"group_id", g.group_id}, {"name", g.name}, {"region", g.region},
                        {"ingress", ingress_to_json(g.ingress)}});
    }
    aj["security_groups"] = std::move(groups);
    ojson instances = ojson::array();
    for (const auto& [iid, i] : a.instances) {
      ojson ij;
      ij["instance_id"] = i.instance_id;
      ij["name"] = i.name;
      ij["region"] = i.region;
      ij["profile"] = i.profile ? ojson(i.profile->render()) : ojson(nullptr);
      ij["security_groups"] = strings(i.security_groups);
      ij["state"] = std::string(to_string(i.state));
      ij["ssm_managed"] = i.ssm_managed;
      ij["profile_session_key"] = i.profile_session_key ? ojson(*i.profile_session_key) : ojson(nullptr);
      instances.push_back(std::move(ij));
    }
    aj["instances"] = std::move(instances);
    accounts.push_back(std::move(aj));
  }
  j["accounts"] = std::move(accounts);
  ojson edges = ojson::array();
  for (const auto& e : env.trust_edges) edges.push_back({{"source", e.source.render()}, {"target", e.target.render()}});
  j["trust_edges"] = std::move(edges);
  ojson sessions = ojson::array();
  for (const auto& s : env.sessions) {
    sessions.push_back({{"access_key_id", s.access_key_id}, {"role", s.role.render()},
                        {"session_name", s.session_name}, {"issued_at", format_rfc3339(s.issued_at)}});
  }
  j["sessions"] = std::move(sessions);
  return j;
}

Environment environment_from_json(const ojson& j) {
  Environment env;
  try {
    env.seed = std::stoull(get_string(j, "seed"));
  } catch (const std::logic_error&) {
    throw ParseError("field 'seed' must be a decimal string");
  }
  env.region = get_string(j, "region");
  env.clock = parse_rfc3339(get_string(j, "clock"));
  env.sequence = static_cast<std::uint64_t>(get_int(j, "sequence"));
  for (const auto& aj : get_array(j, "accounts")) {
    Account a;
    a.id = get_string(aj, "id");
    if (!is_account_id(a.id)) throw ParseError("account id '" + a.id + "' must be 12 digits");
    a.alias = get_string(aj, "alias");
    a.cloudtrail_enabled = get_bool(aj, "cloudtrail_enabled");
    for (const auto& u : get_array(aj, "users")) {
      IamPrincipal p = principal_from_json(u);
      a.users.emplace(p.name(), std::move(p));
    }
    for (const auto& r : get_array(aj, "roles")) {
      IamPrincipal p = principal_from_json(r);
      a.roles.emplace(p.name(), std::move(p));
    }
    for (const auto& bj : get_array(aj, "buckets")) {
      S3Bucket b;
      b.name = get_string(bj, "name");
      b.arn = Arn::parse(get_string(bj, "arn"));
      b.created_at = parse_rfc3339(get_string(bj, "created_at"));
      b.policy = policy_from_json(field(bj, "policy"));
      b.is_public = get_bool(bj, "public");
      for (const auto& o : get_array(bj, "objects")) {
        b.objects.push_back({get_string(o, "key"), get_int(o, "size"), parse_rfc3339(get_string(o, "last_modified"))});
      }
      b.tags = get_string_map(bj, "tags");
      a.buckets.emplace(b.name, std::move(b));
    }
    for (const auto& gj : get_array(aj, "security_groups")) {
      SecurityGroup g{get_string(gj, "group_id"), get_string(gj, "name"), get_string(gj, "region"),
                      ingress_from_json(get_array(gj, "ingress"))};
      a.security_groups.emplace(g.group_id, std::move(g));
    }
    for (const auto& ij : get_array(aj, "instances")) {
      Ec2Instance i;
      i.instance_id = get_string(ij, "instance_id");
      i.name = get_string(ij, "name");
      i.region = get_string(ij, "region");
      if (auto p = get_opt_string(ij, "profile")) i.profile = Arn::parse(*p);
      i.security_groups = get_strings(ij, "security_groups");
      i.state = instance_state_from_string(get_string(ij, "state"));
      i.ssm_managed = get_bool(ij, "ssm_managed");
      i.profile_session_key = get_opt_string(ij, "profile_session_key");
      a.instances.emplace(i.instance_id, std::move(i));
    }
    env.accounts.emplace(a.id, std::move(a));
  }
  for (const auto& e : get_array(j, "trust_edges")) {
    env.trust_edges.push_back({Arn::parse(get_string(e, "source")), Arn::parse(get_string(e, "target"))});
  }
  for (const auto& s : get_array(j, "sessions")) {
    env.sessions.push_back({get_string(s, "access_key_id"), Arn::parse(get_string(s, "role")),
                            get_string(s, "session_name"), parse_rfc3339(get_string(s, "issued_at"))});
  }
  return env;
}

ojson env_spec_to_json(const EnvironmentSpec& spec) {
  ojson j;
  j["category"] = std::string(to_string(spec.category));
  j["region"] = spec.region;
  j["accounts"] = strings(spec.accounts);
  j["cloudtrail_enabled"] = spec.cloudtrail_enabled;
  j["provisioned_at"] = format_rfc3339(spec.provisioned_at);
  ojson users = ojson::array();
  for (const auto& u : spec.users) {
    ojson uj{{"account", u.account}, {"name", u.name}, {"policies", strings(u.policies)}};
    uj["password"] = u.password ? ojson(*u.password) : ojson(nullptr);
    uj["access_keys"] = u.access_keys;
    uj["tags"] = string_map_to_json(u.tags);
    users.push_back(std::move(uj));
  }
  j["users"] = std::move(users);
  ojson roles = ojson::array();
  for (const auto& r : spec.roles) {
    ojson trusted = ojson::array();
    for (const auto& t : r.trusted) trusted.push_back(t.render());
    roles.push_back({{"account", r.account}, {"name", r.name}, {"policies", strings(r.policies)},
                     {"trusted", trusted}, {"trusted_services", strings(r.trusted_services)}});
  }
  j["roles"] = std::move(roles);
  ojson buckets = ojson::array();
  for (const auto& b : spec.buckets) {
    ojson objs = ojson::array();
    for (const auto& o : b.objects) objs.push_back({{"key", o.key}, {"size", o.size}});
    buckets.push_back({{"account", b.account}, {"name", b.name}, {"grant", b.grant},
                       {"objects", objs}, {"tags", string_map_to_json(b.tags)}});
  }
  j["buckets"] = std::move(buckets);
  ojson groups = ojson::array();
  for (const auto& g : spec.security_groups) {
    groups.push_back({{"account", g.account}, {"group_id", g.group_id}, {"name", g.name},
                      {"ingress", ingress_to_json(g.ingress)}});
  }
  j["security_groups"] = std::move(groups);
  ojson instances = ojson::array();
  for (const auto& i : spec.instances) {
    ojson ij{{"account", i.account}, {"instance_id", i.instance_id}, {"name", i.name}};
    ij["profile_role"] = i.profile_role ? ojson(*i.profile_role) : ojson(nullptr);
    ij["security_groups"] = strings(i.security_groups);
    ij["state"] = std::string(to_string(i.state));
    ij["ssm_managed"] = i.ssm_managed;
    instances.push_back(std::move(ij));
  }
  j["instances"] = std::move(instances);
  ojson filler = ojson::object();
  const auto put = [&](const char* k, const std::optional<int>& v) {
    if (v) filler[k] = *v;
  };
  put("users", spec.filler.users);
  put("roles", spec.filler.roles);
  put("buckets", spec.filler.buckets);
  put("objects_per_bucket", spec.filler.objects_per_bucket);
  put("security_groups", spec.filler.security_groups);
  put("instances", spec.filler.instances);
  j["filler"] = std::move(filler);
  return j;
}

EnvironmentSpec env_spec_from_json(const ojson& j) {
  EnvironmentSpec spec;
  spec.category = category_from_string(get_string(j, "category"));
  spec.region = string_or(j, "region", spec.region);
  if (j.contains("accounts")) spec.accounts = get_strings(j, "accounts");
  spec.cloudtrail_enabled = bool_or(j, "cloudtrail_enabled", true);
  if (j.contains("provisioned_at")) spec.provisioned_at = parse_rfc3339(get_string(j, "provisioned_at"));
  const auto array_or_empty = [&](const char* key) -> const ojson& {
    static const ojson empty = ojson::array();
    return j.contains(key) ? get_array(j, key) : empty;
  };
  for (const auto& uj : array_or_empty("users")) {
    UserSpec u;
    u.account = string_or(uj, "account", "primary");
    u.name = get_string(uj, "name");
    if (uj.contains("policies")) u.policies = get_strings(uj, "policies");
    u.password = get_opt_string(uj, "password");
    u.access_keys = static_cast<int>(int_or(uj, "access_keys", 0));
    if (uj.contains("tags")) u.tags = get_string_map(uj, "tags");
    spec.users.push_back(std::move(u));
  }
  for (const auto& rj : array_or_empty("roles")) {
    RoleSpec r;
    r.account = string_or(rj, "account", "primary");
    r.name = get_string(rj, "name");
    if (rj.contains("policies")) r.policies = get_strings(rj, "policies");
    if (rj.contains("trusted")) {
      for (const auto& t : get_strings(rj, "trusted")) r.trusted.push_back(PrincipalName::parse(t));
    }
    if (rj.contains("trusted_services")) r.trusted_services = get_strings(rj, "trusted_services");
    spec.roles.push_back(std::move(r));
  }
  for (const auto& bj : array_or_empty("buckets")) {
    BucketSpec b;
    b.account = string_or(bj, "account", "primary");
    b.name = get_string(bj, "name");
    b.grant = string_or(bj, "grant", "private");
    if (bj.contains("objects")) {
      for (const auto& o : get_array(bj, "objects")) b.objects.push_back({get_string(o, "key"), get_int(o, "size")});
    }
    if (bj.contains("tags")) b.tags = get_string_map(bj, "tags");
    spec.buckets.push_back(std::move(b));
  }
  for (const auto& gj : array_or_empty("security_groups")) {
    SecurityGroupSpec g;
    g.account = string_or(gj, "account", "primary");
    g.group_id = get_string(gj, "group_id");
    g.name = string_or(gj, "name", g.group_id);
    if (gj.contains("ingress")) g.ingress = ingress_from_json(get_array(gj, "ingress"));
    spec.security_groups.push_back(std::move(g));
  }
  for (const auto& ij : array_or_empty("instances")) {
    InstanceSpec i;
    i.account = string_or(ij, "account", "primary");
    i.instance_id = get_string(ij, "instance_id");
    i.name = string_or(ij, "name", i.instance_id);
    i.profile_role = get_opt_string(ij, "profile_role");
    if (ij.contains("security_groups")) i.security_groups = get_strings(ij, "security_groups");
    i.state = instance_state_from_string(string_or(ij, "state", "running"));
    i.ssm_managed = bool_or(ij, "ssm_managed", true);
    spec.instances.push_back(std::move(i));
  }
  if (j.contains("filler")) {
    const ojson& f = field(j, "filler");
    const auto get = [&](const char* k) -> std::optional<int> {
      if (auto v = get_opt_int(f, k)) return static_cast<int>(*v);
      return std::nullopt;
    };
    spec.filler = {get("users"), get("roles"), get("buckets"), get("objects_per_bucket"),
                   get("security_groups"), get("instances")};
  }
  return spec;
}

}  // namespace irbench::cloud
