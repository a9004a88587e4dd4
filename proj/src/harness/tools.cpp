// SPDX-License-Identifier: Apache-2.0
#include "irbench/harness/tools.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "irbench/cloud/serialize.hpp"
#include "irbench/telemetry/jsonl.hpp"
#include "irbench/telemetry/query.hpp"

namespace irbench::harness {

using cloud::Account;
using cloud::Environment;
using cloud::IamPrincipal;

const std::vector<ToolSpec>& tool_catalog() {
  static const std::vector<ToolSpec> tools = {
      {"lookup_events",
       "Query the CloudTrail audit log. Filters combine with AND; the time range is [start_time, end_time).",
       {{"start_time", "timestamp", false, "inclusive, RFC 3339; defaults to the first event"},
        {"end_time", "timestamp", false, "exclusive, RFC 3339; defaults to after the last event"},
        {"event_name", "string", false, "e.g. ConsoleLogin"},
        {"principal", "string", false, "identity ARN or access key id"},
        {"resource", "string", false, "resource ARN"},
        {"max_results", "integer", false, "1-1000, default 50"},
        {"page_token", "string", false, "next_page_token of a previous page"}}},
      {"list_users", "List IAM users with their access keys and attached policies.",
       {{"account_id", "string", false, "restrict to one account"}}},
      {"get_user", "Describe one IAM user.",
       {{"user_name", "string", true, ""}, {"account_id", "string", false, "needed when the name is ambiguous"}}},
      {"list_roles", "List IAM roles with their trusted entities.",
       {{"account_id", "string", false, "restrict to one account"}}},
      {"get_role", "Describe one IAM role including its trust policy.",
       {{"role_name", "string", true, ""}, {"account_id", "string", false, "needed when the name is ambiguous"}}},
      {"list_role_policies", "Policies attached to a role, with their documents.",
       {{"role_name", "string", true, ""}, {"account_id", "string", false, "needed when the name is ambiguous"}}},
      {"list_buckets", "List S3 buckets and whether each is public.", {}},
      {"get_bucket_policy", "Bucket policy document.", {{"bucket_name", "string", true, ""}}},
      {"list_objects", "Objects in a bucket.",
       {{"bucket_name", "string", true, ""},
        {"prefix", "string", false, ""},
        {"max_keys", "integer", false, "1-1000, default 1000"}}},
      {"describe_instances", "EC2 instances with profile, state and security groups.",
       {{"instance_id", "string", false, ""}}},
      {"describe_security_groups", "Security groups and their ingress rules.", {{"group_id", "string", false, ""}}},
      {"get_cost_and_usage", "Daily simulated spend grouped by service.",
       {{"start_date", "date", false, "inclusive, YYYY-MM-DD"}, {"end_date", "date", false, "exclusive, YYYY-MM-DD"}}},
  };
  return tools;
}

const ToolSpec* find_tool(std::string_view name) {
  for (const auto& t : tool_catalog()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

ojson catalog_to_json() {
  ojson out = ojson::array();
  for (const auto& t : tool_catalog()) {
    ojson params = ojson::array();
    for (const auto& p : t.parameters) {
      params.push_back({{"name", p.name}, {"type", p.type}, {"required", p.required}, {"description", p.description}});
    }
    out.push_back({{"name", t.name}, {"description", t.description}, {"parameters", params}});
  }
  return out;
}

namespace {

struct ToolFailure {
  std::string message;
};

std::string schema_hint(const ToolSpec& t) {
  if (t.parameters.empty()) return "expected no parameters";
  std::string s = "expected parameters: ";
  for (std::size_t i = 0; i < t.parameters.size(); ++i) {
    const auto& p = t.parameters[i];
    if (i) s += ", ";
    s += p.name + " (" + p.type + (p.required ? ", required)" : ")");
  }
  return s;
}

bool valid_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  try {
    parse_rfc3339(s + "T00:00:00.000Z");
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

void check_params(const ToolSpec& t, const ojson& params) {
  const auto fail = [&](const std::string& what) { throw ToolFailure{what + "; " + schema_hint(t)}; };
  for (const auto& [k, v] : params.items()) {
    const auto it = std::find_if(t.parameters.begin(), t.parameters.end(), [&](const auto& p) { return p.name == k; });
    if (it == t.parameters.end()) fail("unknown parameter '" + k + "'");
    if (it->type == "integer") {
      if (!v.is_number_integer()) fail("parameter '" + k + "' must be an integer");
    } else {
      if (!v.is_string()) fail("parameter '" + k + "' must be a string");
      if (it->type == "timestamp") {
        try {
          parse_rfc3339(v.get<std::string>());
        } catch (const ParseError&) {
          fail("parameter '" + k + "' is not an RFC 3339 timestamp");
        }
      }
      if (it->type == "date" && !valid_date(v.get<std::string>())) fail("parameter '" + k + "' is not a YYYY-MM-DD date");
    }
  }
  for (const auto& p : t.parameters) {
    if (p.required && !params.contains(p.name)) fail("missing parameter '" + p.name + "'");
  }
}

std::optional<std::string> opt_str(const ojson& p, const char* key) {
  if (!p.contains(key)) return std::nullopt;
  return p.at(key).get<std::string>();
}

std::vector<std::string> policy_names(const IamPrincipal& p) {
  std::vector<std::string> out;
  for (const auto& d : p.attached_policies) out.push_back(d.name);
  return out;
}

ojson tags_json(const std::map<std::string, std::string>& tags) { return string_map_to_json(tags); }

std::vector<const Account*> accounts(const Environment& env, const std::optional<std::string>& account_id) {
  std::vector<const Account*> out;
  for (const auto& [id, a] : env.accounts) {
    if (!account_id || *account_id == id) out.push_back(&a);
  }
  if (account_id && out.empty()) throw ToolFailure{"no account '" + *account_id + "'"};
  return out;
}

const IamPrincipal& find_principal(const Environment& env, const ojson& p, const char* name_key, bool role) {
  const std::string name = p.at(name_key).get<std::string>();
  std::vector<const IamPrincipal*> hits;
  for (const Account* a : accounts(env, opt_str(p, "account_id"))) {
    const auto& pool = role ? a->roles : a->users;
    if (auto it = pool.find(name); it != pool.end()) hits.push_back(&it->second);
  }
  if (hits.empty()) throw ToolFailure{std::string(role ? "no role '" : "no user '") + name + "'"};
  if (hits.size() > 1) throw ToolFailure{"'" + name + "' exists in several accounts; pass account_id"};
  return *hits.front();
}

ojson user_json(const IamPrincipal& u) {
  ojson keys = ojson::array();
  for (const auto& k : u.access_keys) {
    keys.push_back({{"access_key_id", k.id},
                    {"status", k.active ? "Active" : "Inactive"},
                    {"created_at", format_rfc3339(k.created_at)}});
  }
  return {{"user_name", u.name()},
          {"arn", u.arn.render()},
          {"account_id", u.arn.account_id},
          {"created_at", format_rfc3339(u.created_at)},
          {"console_access", u.password_digest.has_value()},
          {"access_keys", keys},
          {"attached_policies", policy_names(u)},
          {"tags", tags_json(u.tags)}};
}

std::vector<std::string> trusted_entities(const Environment& env, const IamPrincipal& role) {
  std::vector<std::string> out;
  for (const auto& e : env.trust_edges) {
    if (e.target == role.arn) out.push_back(e.source.render());
  }
  if (role.trust_policy) {
    for (const auto& s : role.trust_policy->statements) {
      for (const auto& p : s.principals) {
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
      }
    }
  }
  return out;
}

ojson role_json(const Environment& env, const IamPrincipal& r) {
  return {{"role_name", r.name()},
          {"arn", r.arn.render()},
          {"account_id", r.arn.account_id},
          {"created_at", format_rfc3339(r.created_at)},
          {"attached_policies", policy_names(r)},
          {"trusted_entities", trusted_entities(env, r)},
          {"tags", tags_json(r.tags)}};
}

const cloud::S3Bucket& need_bucket(const Environment& env, const ojson& p) {
  const std::string name = p.at("bucket_name").get<std::string>();
  const auto* b = env.bucket(name);
  if (!b) throw ToolFailure{"no bucket '" + name + "'"};
  return *b;
}

ojson lookup_events_tool(const ToolContext& ctx, const ojson& p) {
  telemetry::EventQuery q = telemetry::whole_log_query(ctx.log);
  if (auto s = opt_str(p, "start_time")) q.start = parse_rfc3339(*s);
  if (auto s = opt_str(p, "end_time")) q.end = parse_rfc3339(*s);
  q.event_name = opt_str(p, "event_name");
  q.principal = opt_str(p, "principal");
  if (auto r = opt_str(p, "resource")) {
    try {
      q.resource = Arn::parse(*r);
    } catch (const ParseError& e) {
      throw ToolFailure{std::string("resource: ") + e.what()};
    }
  }
  if (p.contains("max_results")) {
    const auto n = p.at("max_results").get<std::int64_t>();
    if (n < 1 || n > 1000) throw ToolFailure{"max_results must be between 1 and 1000"};
    q.max_results = static_cast<int>(n);
  }
  q.page_token = opt_str(p, "page_token");
  telemetry::QueryPage page;
  try {
    page = telemetry::lookup_events(ctx.log, q);
  } catch (const Error& e) {
    throw ToolFailure{e.what()};
  }
  ojson events = ojson::array();
  for (const auto& e : page.events) events.push_back(telemetry::event_to_json(e));
  ojson out = {{"events", events}};
  out["next_page_token"] = page.next_page_token ? ojson(*page.next_page_token) : ojson(nullptr);
  return out;
}

std::string format_usd(std::int64_t nano) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%lld.%09lld", static_cast<long long>(nano / 1'000'000'000),
                static_cast<long long>(nano % 1'000'000'000));
  return buf;
}

ojson cost_tool(const ToolContext& ctx, const ojson& p) {
  const auto start = opt_str(p, "start_date");
  const auto end = opt_str(p, "end_date");
  if (start && end && *start > *end) throw ToolFailure{"start_date is after end_date"};
  struct Cell {
    std::int64_t nano = 0;
    std::int64_t requests = 0;
  };
  std::map<std::string, std::map<std::string, Cell>> days;
  std::int64_t total = 0;
  for (const auto& e : ctx.log.events()) {
    const std::string day = format_date(e.event_time);
    if ((start && day < *start) || (end && day >= *end)) continue;
    const std::int64_t cost = event_cost_nano(e);
    Cell& c = days[day][service_display_name(e.event_source)];
    c.nano += cost;
    c.requests += 1;
    total += cost;
  }
  ojson results = ojson::array();
  for (const auto& [day, services] : days) {
    ojson groups = ojson::array();
    for (const auto& [svc, c] : services) {
      groups.push_back({{"service", svc}, {"requests", c.requests}, {"amount", format_usd(c.nano)}});
    }
    results.push_back({{"date", day}, {"groups", groups}});
  }
  return {{"granularity", "DAILY"}, {"unit", "USD"}, {"results", results}, {"total", format_usd(total)}};
}

ojson dispatch(const ToolContext& ctx, const std::string& tool, const ojson& p) {
  const Environment& env = ctx.env;
  if (tool == "lookup_events") return lookup_events_tool(ctx, p);
  if (tool == "list_users") {
    ojson users = ojson::array();
    for (const Account* a : accounts(env, opt_str(p, "account_id"))) {
      for (const auto& [n, u] : a->users) users.push_back(user_json(u));
    }
    return {{"users", users}};
  }
  if (tool == "get_user") return user_json(find_principal(env, p, "user_name", false));
  if (tool == "list_roles") {
    ojson roles = ojson::array();
    for (const Account* a : accounts(env, opt_str(p, "account_id"))) {
      for (const auto& [n, r] : a->roles) roles.push_back(role_json(env, r));
    }
    return {{"roles", roles}};
  }
  if (tool == "get_role") {
    const IamPrincipal& r = find_principal(env, p, "role_name", true);
    ojson out = role_json(env, r);
    out["assume_role_policy"] = r.trust_policy ? cloud::aws_policy_document(*r.trust_policy) : ojson(nullptr);
    return out;
  }
  if (tool == "list_role_policies") {
    const IamPrincipal& r = find_principal(env, p, "role_name", true);
    ojson policies = ojson::array();
    for (const auto& d : r.attached_policies) {
      policies.push_back({{"policy_name", d.name},
                          {"policy_arn", "arn:aws:iam::aws:policy/" + d.name},
                          {"document", cloud::aws_policy_document(d)}});
    }
    return {{"role_name", r.name()}, {"arn", r.arn.render()}, {"policies", policies}};
  }
  if (tool == "list_buckets") {
    std::vector<const cloud::S3Bucket*> all;
    for (const auto& [id, a] : env.accounts) {
      for (const auto& [n, b] : a.buckets) all.push_back(&b);
    }
    std::sort(all.begin(), all.end(), [](auto* x, auto* y) { return x->name < y->name; });
    ojson buckets = ojson::array();
    for (const auto* b : all) {
      buckets.push_back({{"name", b->name},
                         {"arn", b->arn.render()},
                         {"account_id", b->arn.account_id},
                         {"created_at", format_rfc3339(b->created_at)},
                         {"public", b->is_public},
                         {"object_count", b->objects.size()},
                         {"tags", tags_json(b->tags)}});
    }
    return {{"buckets", buckets}};
  }
  if (tool == "get_bucket_policy") {
    const auto& b = need_bucket(env, p);
    return {{"bucket_name", b.name}, {"public", b.is_public}, {"policy", cloud::aws_policy_document(b.policy)}};
  }
  if (tool == "list_objects") {
    const auto& b = need_bucket(env, p);
    const std::string prefix = opt_str(p, "prefix").value_or("");
    std::int64_t max_keys = 1000;
    if (p.contains("max_keys")) {
      max_keys = p.at("max_keys").get<std::int64_t>();
      if (max_keys < 1 || max_keys > 1000) throw ToolFailure{"max_keys must be between 1 and 1000"};
    }
    ojson objects = ojson::array();
    bool truncated = false;
    for (const auto& o : b.objects) {
      if (o.key.rfind(prefix, 0) != 0) continue;
      if (static_cast<std::int64_t>(objects.size()) == max_keys) {
        truncated = true;
        break;
      }
      objects.push_back({{"key", o.key}, {"size", o.size}, {"last_modified", format_rfc3339(o.last_modified)}});
    }
    return {{"bucket_name", b.name}, {"objects", objects}, {"truncated", truncated}};
  }
  if (tool == "describe_instances") {
    const auto want = opt_str(p, "instance_id");
    if (want && !env.instance(*want)) throw ToolFailure{"no instance '" + *want + "'"};
    ojson instances = ojson::array();
    for (const auto& [id, a] : env.accounts) {
      for (const auto& [iid, i] : a.instances) {
        if (want && *want != iid) continue;
        ojson j = {{"instance_id", i.instance_id}, {"name", i.name}, {"account_id", id}, {"region", i.region},
                   {"state", std::string(cloud::to_string(i.state))}};
        j["iam_instance_profile"] = i.profile ? ojson(i.profile->render()) : ojson(nullptr);
        j["security_groups"] = i.security_groups;
        j["ssm_managed"] = i.ssm_managed;
        instances.push_back(std::move(j));
      }
    }
    return {{"instances", instances}};
  }
  if (tool == "describe_security_groups") {
    const auto want = opt_str(p, "group_id");
    if (want && !env.security_group(*want)) throw ToolFailure{"no security group '" + *want + "'"};
    ojson groups = ojson::array();
    for (const auto& [id, a] : env.accounts) {
      for (const auto& [gid, g] : a.security_groups) {
        if (want && *want != gid) continue;
        ojson rules = ojson::array();
        for (const auto& r : g.ingress) {
          rules.push_back({{"protocol", r.protocol}, {"from_port", r.from_port}, {"to_port", r.to_port}, {"cidr", r.cidr}});
        }
        groups.push_back({{"group_id", g.group_id}, {"name", g.name}, {"account_id", id}, {"region", g.region},
                          {"ingress", rules}});
      }
    }
    return {{"security_groups", groups}};
  }
  if (tool == "get_cost_and_usage") return cost_tool(ctx, p);
  throw ToolFailure{"tool '" + tool + "' has no handler"};
}

}  // namespace

std::string service_display_name(std::string_view source) {
  static const std::map<std::string, std::string, std::less<>> names = {
      {"s3.amazonaws.com", "Amazon Simple Storage Service"},
      {"ec2.amazonaws.com", "Amazon Elastic Compute Cloud"},
      {"iam.amazonaws.com", "AWS Identity and Access Management"},
      {"sts.amazonaws.com", "AWS Security Token Service"},
      {"ssm.amazonaws.com", "AWS Systems Manager"},
      {"signin.amazonaws.com", "AWS Sign-In"},
  };
  auto it = names.find(source);
  return it == names.end() ? std::string(source) : it->second;
}

std::int64_t event_cost_nano(const telemetry::CloudEvent& e) {
  const std::string& n = e.event_name;
  if (e.event_source == "s3.amazonaws.com") {
    if (n == "GetObject" || n == "SelectObjectContent") {
      std::int64_t bytes = 0;
      if (auto it = e.response_elements.find("bytesTransferredOut"); it != e.response_elements.end()) {
        try {
          bytes = std::stoll(it->second);
        } catch (const std::exception&) {
          bytes = 0;
        }
      }
      // $0.0004 per 1000 requests plus $0.09 per GB out.
      return 400 + bytes * 9 / 100;
    }
    // $0.005 per 1000 list/write requests.
    return 5000;
  }
  if (e.event_source == "ssm.amazonaws.com" && (n == "SendCommand" || n == "CreateAssociation")) return 50'000;
  return 0;
}

ToolResult answer_tool_call(const ToolContext& ctx, const ToolCall& call) {
  ToolResult r;
  r.call_id = call.call_id;
  const ToolSpec* spec = find_tool(call.tool);
  if (!spec) {
    r.ok = false;
    r.error = "unknown tool '" + call.tool + "'";
    return r;
  }
  try {
    const ojson params = call.parameters.is_null() ? ojson::object() : call.parameters;
    if (!params.is_object()) throw ToolFailure{"parameters must be an object; " + schema_hint(*spec)};
    check_params(*spec, params);
    r.payload = dispatch(ctx, call.tool, params);
  } catch (const ToolFailure& f) {
    r.ok = false;
    r.error = f.message;
  }
  return r;
}

}  // namespace irbench::harness
