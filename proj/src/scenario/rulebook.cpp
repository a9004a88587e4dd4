// SPDX-License-Identifier: Apache-2.0
#include "irbench/scenario/rulebook.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

#include "irbench/cloud/policy.hpp"
#include "irbench/core/errors.hpp"

namespace irbench::scenario {

using telemetry::CloudEvent;
using telemetry::IdentityKind;

namespace {

struct Ev {
  const TraceEntry* trace;
  const CloudEvent* event;
};

struct Ctx {
  std::vector<Ev> all;  // log order
  const cloud::Environment& env;
  const Alert& alert;

  std::vector<Ev> with_intent(Intent intent, bool successful_only) const {
    std::vector<Ev> out;
    for (const auto& ev : all) {
      if (ev.trace->background || ev.trace->intent != intent) continue;
      if (successful_only && !ev.event->succeeded()) continue;
      out.push_back(ev);
    }
    return out;
  }
  std::vector<Ev> malicious() const { return with_intent(Intent::malicious, true); }
  std::vector<Ev> benign() const { return with_intent(Intent::benign, true); }
};

struct Match {
  std::map<std::string, std::string> slots;
  std::vector<const CloudEvent*> events;
  std::vector<std::string> arns;
};

using RuleFn = std::function<std::vector<Match>(const Ctx&)>;

struct Rule {
  RuleInfo info;
  RuleFn fn;
};

std::string param(const CloudEvent& e, const std::string& key) {
  const auto it = e.request_parameters.find(key);
  return it == e.request_parameters.end() ? std::string() : it->second;
}

std::string response(const CloudEvent& e, const std::string& key) {
  const auto it = e.response_elements.find(key);
  return it == e.response_elements.end() ? std::string() : it->second;
}

bool named(const CloudEvent& e, std::initializer_list<std::string_view> names) {
  return std::find(names.begin(), names.end(), e.event_name) != names.end();
}

std::string principal_of(const CloudEvent& e) {
  if (e.user_identity.arn) return e.user_identity.arn->render();
  if (e.user_identity.kind == IdentityKind::service) return "an AWS service";
  return "an anonymous caller";
}

// Credentials behind a request: the access key, else the identity, else the
// network source.
std::string actor_key(const CloudEvent& e) {
  if (e.user_identity.access_key_id) return "key:" + *e.user_identity.access_key_id;
  if (e.user_identity.arn) return "arn:" + e.user_identity.arn->render();
  return "ip:" + e.source_ip;
}

std::string role_name_of(const std::string& role_arn) {
  try {
    return Arn::parse(role_arn).resource_name();
  } catch (const ParseError&) {
    return role_arn;
  }
}

// Role behind an assumed-role identity ("assumed-role/<role>/<session>").
std::optional<Arn> session_role(const CloudEvent& e) {
  const auto& id = e.user_identity;
  if (id.kind != IdentityKind::assumed_role || !id.arn || id.arn->resource_path.size() < 2) return std::nullopt;
  return Arn::iam_role(id.arn->account_id, id.arn->resource_path[1]);
}

bool private_address(const std::string& ip) {
  if (ip.rfind("10.", 0) == 0 || ip.rfind("192.168.", 0) == 0) return true;
  if (ip.rfind("172.", 0) == 0) {
    const auto dot = ip.find('.', 4);
    const int second = std::atoi(ip.substr(4, dot - 4).c_str());
    return second >= 16 && second <= 31;
  }
  return false;
}

std::string join(const std::vector<std::string>& items, std::size_t limit = 3) {
  std::string out;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  if (items.size() > limit) out += " and others";
  return out;
}

std::vector<std::string> unique_sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::optional<std::string> bucket_arn(const cloud::Environment& env, const std::string& name) {
  if (const auto* b = env.bucket(name)) return b->arn.render();
  return std::nullopt;
}

std::optional<std::string> instance_arn(const cloud::Environment& env, const std::string& id) {
  const auto* i = env.instance(id);
  const auto* owner = env.owner_of_instance(id);
  if (!i || !owner) return std::nullopt;
  return Arn::instance(i->region, owner->id, id).render();
}

bool public_policy(const std::string& policy_json) {
  const auto doc = nlohmann::json::parse(policy_json, nullptr, false);
  if (doc.is_discarded() || !doc.contains("Statement")) return false;
  for (const auto& s : doc["Statement"]) {
    if (!s.contains("Principal")) continue;
    for (const auto& p : s["Principal"]) {
      if (p == "*") return true;
    }
  }
  return false;
}

// First "CHG-<digits>" reference among the request parameter values.
std::optional<std::string> change_ticket(const CloudEvent& e) {
  for (const auto& [k, v] : e.request_parameters) {
    for (std::size_t pos = v.find("CHG-"); pos != std::string::npos; pos = v.find("CHG-", pos + 1)) {
      std::size_t end = pos + 4;
      while (end < v.size() && std::isdigit(static_cast<unsigned char>(v[end]))) ++end;
      if (end > pos + 4) return v.substr(pos, end - pos);
    }
  }
  return std::nullopt;
}

void push_arn(Match& m, const std::optional<std::string>& arn) {
  if (arn) m.arns.push_back(*arn);
}

// ---- rules -----------------------------------------------------------------

std::vector<Match> alert_summary(const Ctx& c) {
  Match m;
  m.slots["alert"] = c.alert.description;
  for (const auto& ev : c.all) {
    if (std::find(c.alert.triggering_event_ids.begin(), c.alert.triggering_event_ids.end(),
                  ev.event->event_id) != c.alert.triggering_event_ids.end()) {
      m.events.push_back(ev.event);
    }
  }
  return {m};
}

std::vector<Match> failed_then_success(const Ctx& c) {
  std::map<std::string, std::vector<const CloudEvent*>> failures;
  std::set<std::string> done;
  std::vector<Match> out;
  for (const auto& ev : c.with_intent(Intent::malicious, false)) {
    const CloudEvent& e = *ev.event;
    if (e.event_name != "ConsoleLogin") continue;
    const std::string user = param(e, "userName");
    if (done.count(user)) continue;
    if (!e.succeeded()) {
      failures[user].push_back(&e);
      continue;
    }
    auto& fails = failures[user];
    if (fails.size() >= 3) {
      Match m;
      m.slots = {{"failures", std::to_string(fails.size())}, {"user", user},
                 {"time", format_rfc3339(e.event_time)}};
      m.events = fails;
      m.events.push_back(&e);
      if (e.user_identity.arn) m.arns.push_back(e.user_identity.arn->render());
      out.push_back(std::move(m));
    }
    done.insert(user);
  }
  return out;
}

std::vector<Match> iam_enumeration(const Ctx& c) {
  std::map<std::string, Match> by_principal;
  std::vector<std::string> order;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (!named(e, {"ListUsers", "ListRoles", "GetAccountAuthorizationDetails"})) continue;
    const std::string who = principal_of(e);
    auto [it, fresh] = by_principal.try_emplace(who);
    if (fresh) {
      order.push_back(who);
      it->second.slots = {{"principal", who}, {"account", e.user_identity.account_id.value_or("unknown")}};
      if (e.user_identity.arn) it->second.arns.push_back(who);
    }
    it->second.events.push_back(&e);
  }
  std::vector<Match> out;
  for (const auto& who : order) out.push_back(by_principal[who]);
  return out;
}

std::vector<Match> user_and_key(const Ctx& c) {
  const auto evs = c.malicious();
  std::vector<Match> out;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const CloudEvent& create = *evs[i].event;
    if (create.event_name != "CreateUser") continue;
    const std::string user = param(create, "userName");
    for (std::size_t j = i + 1; j < evs.size(); ++j) {
      const CloudEvent& key = *evs[j].event;
      if (key.event_name != "CreateAccessKey" || param(key, "userName") != user) continue;
      if (key.user_identity.arn != create.user_identity.arn) continue;
      Match m;
      m.slots = {{"new_user", user}, {"key", response(key, "accessKeyId")}};
      m.events = {&create, &key};
      m.arns.push_back(response(create, "userArn"));
      out.push_back(std::move(m));
      break;
    }
  }
  return out;
}

std::vector<Match> admin_policy(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (!named(e, {"AttachUserPolicy", "AttachRolePolicy"})) continue;
    const std::string policy_arn = param(e, "policyArn");
    const std::string policy = policy_arn.substr(policy_arn.rfind('/') + 1);
    const auto doc = cloud::managed_policy(policy);
    if (!doc || !cloud::is_admin(*doc)) continue;
    const bool user = e.event_name == "AttachUserPolicy";
    const std::string target = param(e, user ? "userName" : "roleName");
    Match m;
    m.slots = {{"target", target}, {"policy", policy}};
    m.events = {&e};
    if (e.user_identity.account_id) {
      m.arns.push_back((user ? Arn::iam_user(*e.user_identity.account_id, target)
                             : Arn::iam_role(*e.user_identity.account_id, target)).render());
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> new_key_use(const Ctx& c) {
  const auto evs = c.malicious();
  std::vector<Match> out;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const CloudEvent& create = *evs[i].event;
    if (create.event_name != "CreateAccessKey") continue;
    const std::string key = response(create, "accessKeyId");
    Match m;
    std::vector<std::string> names;
    for (std::size_t j = i + 1; j < evs.size(); ++j) {
      const CloudEvent& use = *evs[j].event;
      if (use.user_identity.access_key_id != key) continue;
      if (m.events.empty()) {
        m.events.push_back(&create);
        m.slots["source_ip"] = use.source_ip;
      }
      m.events.push_back(&use);
      names.push_back(use.event_name);
    }
    if (m.events.empty()) continue;
    m.slots["key"] = key;
    m.slots["event_names"] = join(unique_sorted(names));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> role_chain(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (e.event_name != "AssumeRole" || e.user_identity.kind != IdentityKind::assumed_role) continue;
    const auto src_role = session_role(e);
    if (!src_role) continue;
    Match m;
    for (const auto& prior : c.all) {
      if (prior.event->event_name == "AssumeRole" && prior.event->succeeded() &&
          response(*prior.event, "accessKeyId") == e.user_identity.access_key_id) {
        m.events.push_back(prior.event);
      }
    }
    m.events.push_back(&e);
    m.slots = {{"source_role", src_role->resource_name()}, {"target_role", role_name_of(param(e, "roleArn"))}};
    m.arns = {src_role->render(), param(e, "roleArn")};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> cross_account(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (e.event_name != "AssumeRole" || !e.user_identity.account_id) continue;
    Arn role;
    try {
      role = Arn::parse(param(e, "roleArn"));
    } catch (const ParseError&) {
      continue;
    }
    if (role.account_id == *e.user_identity.account_id) continue;
    Match m;
    m.slots = {{"source_account", *e.user_identity.account_id}, {"role", role.resource_name()},
               {"target_account", role.account_id}};
    m.events = {&e};
    m.arns = {role.render()};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> s3_enumeration(const Ctx& c) {
  const auto evs = c.malicious();
  std::vector<Match> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const CloudEvent& list = *evs[i].event;
    if (list.event_name != "ListBuckets") continue;
    const std::string who = actor_key(list);
    if (!seen.insert(who).second) continue;
    Match m;
    m.events.push_back(&list);
    std::vector<std::string> buckets;
    for (std::size_t j = i + 1; j < evs.size(); ++j) {
      const CloudEvent& e = *evs[j].event;
      if (!named(e, {"ListObjects", "ListObjectsV2"}) || actor_key(e) != who) continue;
      m.events.push_back(&e);
      buckets.push_back(param(e, "bucketName"));
    }
    if (buckets.empty()) continue;
    buckets = unique_sorted(buckets);
    for (const auto& b : buckets) push_arn(m, bucket_arn(c.env, b));
    m.slots = {{"principal", principal_of(list)}, {"buckets", join(buckets)}};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> bulk_read(const Ctx& c) {
  const auto evs = c.malicious();
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> reads;
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const CloudEvent& e = *evs[i].event;
    if (!named(e, {"GetObject", "SelectObjectContent"}) || private_address(e.source_ip)) continue;
    const auto key = std::make_pair(e.source_ip, param(e, "bucketName"));
    if (!reads.count(key)) order.push_back(key);
    reads[key].push_back(i);
  }
  std::vector<Match> out;
  for (const auto& key : order) {
    const auto& idx = reads[key];
    if (static_cast<int>(idx.size()) < kExfiltrationMinReads) continue;
    Match m;
    for (std::size_t i = 0; i < idx.front(); ++i) {
      const CloudEvent& e = *evs[i].event;
      if (e.source_ip != key.first) continue;
      if (e.event_name == "ListBuckets" ||
          (named(e, {"ListObjects", "ListObjectsV2"}) && param(e, "bucketName") == key.second)) {
        m.events.push_back(&e);
      }
    }
    if (m.events.empty()) continue;  // reads without prior enumeration
    std::int64_t bytes = 0;
    for (const auto i : idx) {
      m.events.push_back(evs[i].event);
      bytes += std::atoll(response(*evs[i].event, "bytesTransferredOut").c_str());
    }
    m.slots = {{"count", std::to_string(idx.size())}, {"bytes", std::to_string(bytes)},
               {"bucket", key.second}, {"source_ip", key.first}};
    push_arn(m, bucket_arn(c.env, key.second));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> role_permissions(const Ctx& c) {
  std::vector<Match> out;
  std::set<std::string> seen;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (!named(e, {"GetObject", "SelectObjectContent", "ListObjects", "ListObjectsV2"})) continue;
    const auto role = session_role(e);
    if (!role || !seen.insert(role->render()).second) continue;
    const auto* p = c.env.principal(*role);
    if (!p) continue;
    std::vector<std::string> policies;
    for (const auto& doc : p->attached_policies) policies.push_back(doc.name);
    if (policies.empty()) continue;
    Match m;
    m.slots = {{"role", role->resource_name()}, {"policies", join(policies)}, {"bucket", param(e, "bucketName")}};
    m.events = {&e};
    m.arns = {role->render()};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> public_policy_author(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (e.event_name != "PutBucketPolicy" || !public_policy(param(e, "bucketPolicy"))) continue;
    Match m;
    m.slots = {{"bucket", param(e, "bucketName")}, {"principal", principal_of(e)}, {"source_ip", e.source_ip}};
    m.events = {&e};
    push_arn(m, bucket_arn(c.env, param(e, "bucketName")));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> anonymous_reads(const Ctx& c) {
  const auto evs = c.malicious();
  std::vector<Match> out;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const CloudEvent& policy = *evs[i].event;
    if (policy.event_name != "PutBucketPolicy" || !public_policy(param(policy, "bucketPolicy"))) continue;
    const std::string bucket = param(policy, "bucketName");
    Match m;
    std::vector<std::string> sources;
    for (std::size_t j = i + 1; j < evs.size(); ++j) {
      const CloudEvent& e = *evs[j].event;
      if (e.user_identity.kind != IdentityKind::anonymous || param(e, "bucketName") != bucket) continue;
      if (!named(e, {"GetObject", "SelectObjectContent", "ListObjects", "ListObjectsV2"})) continue;
      if (m.events.empty()) m.events.push_back(&policy);
      m.events.push_back(&e);
      sources.push_back(e.source_ip);
    }
    if (m.events.empty()) continue;
    m.slots = {{"count", std::to_string(m.events.size() - 1)}, {"sources", join(unique_sorted(sources))},
               {"bucket", bucket}};
    push_arn(m, bucket_arn(c.env, bucket));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> security_group_opened(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (!named(e, {"AuthorizeSecurityGroupIngress", "ModifySecurityGroupRules"})) continue;
    const std::string cidr = param(e, "cidrIp");
    if (private_address(cidr)) continue;
    const std::string group = param(e, "groupId");
    Match m;
    m.slots = {{"group", group}, {"cidr", cidr}, {"port", param(e, "fromPort")}};
    m.events = {&e};
    const auto* g = c.env.security_group(group);
    const auto* owner = c.env.owner_of_security_group(group);
    if (g && owner) m.arns.push_back(Arn::security_group(g->region, owner->id, group).render());
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> no_change_approval(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (e.event_name != "PutBucketPolicy") continue;
    const std::string bucket = param(e, "bucketName");
    const auto* b = c.env.bucket(bucket);
    if (b && b->tags.count("change-ticket")) continue;
    const bool ticketed = std::any_of(c.all.begin(), c.all.end(), [&](const Ev& other) {
      return param(*other.event, "bucketName") == bucket && change_ticket(*other.event);
    });
    if (ticketed) continue;
    Match m;
    m.slots = {{"bucket", bucket}, {"principal", principal_of(e)}};
    m.events = {&e};
    push_arn(m, bucket_arn(c.env, bucket));
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<std::string> reverse_shell_target(const std::string& cmd) {
  const auto pos = cmd.find("/dev/tcp/");
  if (pos != std::string::npos) {
    const std::size_t start = pos + 9;
    std::size_t end = start;
    while (end < cmd.size() && (std::isalnum(static_cast<unsigned char>(cmd[end])) || cmd[end] == '.' || cmd[end] == '/')) ++end;
    std::string target = cmd.substr(start, end - start);
    std::replace(target.begin(), target.end(), '/', ':');
    return target;
  }
  if (cmd.find("nc ") != std::string::npos && cmd.find(" -e ") != std::string::npos) return std::string("a netcat listener");
  return std::nullopt;
}

std::vector<Match> reverse_shell(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (!named(e, {"SendCommand", "CreateAssociation"})) continue;
    const auto target = reverse_shell_target(param(e, "commands"));
    if (!target) continue;
    Match m;
    m.slots = {{"instance", param(e, "instanceId")}, {"remote", *target}};
    m.events = {&e};
    push_arn(m, instance_arn(c.env, param(e, "instanceId")));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> payload_download(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.malicious()) {
    const CloudEvent& e = *ev.event;
    if (!named(e, {"SendCommand", "CreateAssociation"})) continue;
    const std::string cmd = param(e, "commands");
    if (cmd.find("curl ") == std::string::npos && cmd.find("wget ") == std::string::npos) continue;
    if (cmd.find('|') == std::string::npos) continue;
    const auto http = cmd.find("http");
    if (http == std::string::npos) continue;
    const auto end = cmd.find(' ', http);
    Match m;
    m.slots = {{"instance", param(e, "instanceId")}, {"url", cmd.substr(http, end - http)}};
    m.events = {&e};
    push_arn(m, instance_arn(c.env, param(e, "instanceId")));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> instance_profile(const Ctx& c) {
  std::map<std::string, Match> by_key;
  std::vector<std::string> order;
  for (const auto& ev : c.with_intent(Intent::malicious, false)) {
    const CloudEvent& e = *ev.event;
    if (e.user_identity.kind != IdentityKind::assumed_role || !e.user_identity.access_key_id) continue;
    const auto* session = c.env.session(*e.user_identity.access_key_id);
    if (!session) continue;
    const auto* inst = c.env.instance(session->session_name);
    if (!inst || inst->profile_session_key != session->access_key_id) continue;
    auto [it, fresh] = by_key.try_emplace(session->access_key_id);
    Match& m = it->second;
    if (fresh) {
      order.push_back(session->access_key_id);
      m.slots = {{"role", session->role.resource_name()}, {"instance", inst->instance_id},
                 {"source_ip", e.source_ip}};
      m.arns.push_back(session->role.render());
      push_arn(m, instance_arn(c.env, inst->instance_id));
    }
    m.events.push_back(&e);
  }
  std::vector<Match> out;
  for (const auto& k : order) out.push_back(by_key[k]);
  return out;
}

std::vector<Match> benign_change_ticket(const Ctx& c) {
  std::map<std::string, Match> by_ticket;
  std::vector<std::string> order;
  for (const auto& ev : c.benign()) {
    const CloudEvent& e = *ev.event;
    const auto ticket = change_ticket(e);
    if (!ticket) continue;
    auto [it, fresh] = by_ticket.try_emplace(*ticket);
    Match& m = it->second;
    if (fresh) {
      order.push_back(*ticket);
      std::string resource = "the account";
      if (!param(e, "bucketName").empty()) {
        resource = param(e, "bucketName");
        push_arn(m, bucket_arn(c.env, resource));
      } else if (!param(e, "groupId").empty()) {
        resource = param(e, "groupId");
      } else if (!param(e, "instanceId").empty()) {
        resource = param(e, "instanceId");
        push_arn(m, instance_arn(c.env, resource));
      } else if (!param(e, "roleArn").empty()) {
        resource = role_name_of(param(e, "roleArn"));
        m.arns.push_back(param(e, "roleArn"));
      }
      m.slots = {{"ticket", *ticket}, {"principal", principal_of(e)}, {"resource", resource}};
    }
    m.events.push_back(&e);
  }
  std::vector<Match> out;
  for (const auto& t : order) out.push_back(by_ticket[t]);
  return out;
}

std::vector<Match> benign_partner_trust(const Ctx& c) {
  std::vector<Match> out;
  for (const auto& ev : c.benign()) {
    const CloudEvent& e = *ev.event;
    if (e.event_name != "AssumeRole" || !e.user_identity.arn || !e.user_identity.account_id) continue;
    Arn role;
    try {
      role = Arn::parse(param(e, "roleArn"));
    } catch (const ParseError&) {
      continue;
    }
    if (role.account_id == *e.user_identity.account_id) continue;
    const Arn source = session_role(e).value_or(*e.user_identity.arn);
    if (!c.env.has_trust_edge(source, role)) continue;
    Match m;
    m.slots = {{"role", role.resource_name()}, {"source_account", *e.user_identity.account_id}};
    m.events = {&e};
    m.arns = {role.render(), source.render()};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> benign_cicd(const Ctx& c) {
  const auto evs = c.benign();
  std::vector<Match> out;
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const CloudEvent& e = *evs[i].event;
    if (e.event_name != "AssumeRole" || e.user_identity.kind != IdentityKind::service) continue;
    const std::string key = response(e, "accessKeyId");
    Match m;
    m.events.push_back(&e);
    for (std::size_t j = i + 1; j < evs.size(); ++j) {
      if (evs[j].event->user_identity.access_key_id == key) m.events.push_back(evs[j].event);
    }
    m.slots = {{"role", role_name_of(param(e, "roleArn"))}, {"service", param(e, "servicePrincipal")}};
    m.arns = {param(e, "roleArn")};
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> benign_helpdesk(const Ctx& c) {
  std::vector<Match> out;
  for (std::size_t i = 0; i < c.all.size(); ++i) {
    const Ev& ev = c.all[i];
    const CloudEvent& reset = *ev.event;
    if (ev.trace->background || ev.trace->intent != Intent::benign || !reset.succeeded() ||
        reset.event_name != "UpdateLoginProfile" || !reset.user_identity.arn) {
      continue;
    }
    const std::string user = param(reset, "userName");
    for (std::size_t j = i + 1; j < c.all.size(); ++j) {
      const CloudEvent& login = *c.all[j].event;
      if (login.event_name != "ConsoleLogin" || !login.succeeded() || param(login, "userName") != user) continue;
      Match m;
      m.slots = {{"helper", reset.user_identity.arn->resource_name()}, {"user", user}};
      m.events = {&reset, &login};
      if (login.user_identity.arn) m.arns.push_back(login.user_identity.arn->render());
      out.push_back(std::move(m));
      break;
    }
  }
  return out;
}

using C = Category;

const std::vector<Rule>& rules() {
  static const std::vector<Rule> table = {
      {{"alert.summary", "{alert}", {}, {}}, alert_summary},
      {{"auth.failed_then_success",
        "CloudTrail recorded {failures} rejected ConsoleLogin attempts on {user} before the first accepted login at {time}",
        {"lookup_events", "list_users"}, {C::brute_force}},
       failed_then_success},
      {{"recon.iam_enumeration",
        "The compromised identity {principal} enumerated IAM principals of account {account} after gaining access",
        {"lookup_events", "list_users"}, {}},
       iam_enumeration},
      {{"persistence.user_and_key",
        "Attacker established persistence by creating IAM user {new_user} and issuing it access key {key}",
        {"lookup_events", "list_users"}, {}},
       user_and_key},
      {{"privesc.admin_policy",
        "Privilege escalation: {target} received the {policy} managed policy, granting unrestricted administrative rights",
        {"lookup_events", "get_user"}, {}},
       admin_policy},
      {{"persistence.new_key_use",
        "Newly issued access key {key} was later used from {source_ip} to call {event_names}",
        {"lookup_events"}, {}},
       new_key_use},
      {{"lateral.role_chain",
        "Role chaining: a session of {source_role} was used to assume {target_role}, extending access beyond the original credentials",
        {"lookup_events", "list_roles"}, {}},
       role_chain},
      {{"lateral.cross_account",
        "Cross-account pivot: an identity from account {source_account} obtained role {role} in account {target_account}",
        {"lookup_events", "get_role"}, {}},
       cross_account},
      {{"collection.s3_enumeration",
        "Storage discovery: {principal} listed all buckets and then browsed the contents of {buckets}",
        {"lookup_events", "list_buckets"}, {}},
       s3_enumeration},
      {{"exfiltration.bulk_read",
        "Data exfiltration: {count} objects totaling {bytes} bytes were read from {bucket} by external address {source_ip}",
        {"lookup_events", "list_objects"}, {}},
       bulk_read},
      {{"collection.role_permissions",
        "Role {role} carries {policies}, which is what let its session read {bucket}",
        {"lookup_events", "list_role_policies"}, {C::unauthorized_access}},
       role_permissions},
      {{"exposure.public_policy_author",
        "The world-readable policy on {bucket} was written by {principal} from {source_ip}",
        {"lookup_events", "get_bucket_policy"}, {}},
       public_policy_author},
      {{"exposure.anonymous_reads",
        "Unintended access: {count} unauthenticated requests from {sources} read {bucket} once it was exposed",
        {"lookup_events", "get_bucket_policy"}, {}},
       anonymous_reads},
      {{"exposure.security_group_opened",
        "Network exposure: firewall group {group} was changed to admit {cidr} on port {port}",
        {"lookup_events", "describe_security_groups"}, {}},
       security_group_opened},
      {{"exposure.no_change_approval",
        "No change ticket or approval tag accompanies the edit of {bucket} made by {principal}",
        {"lookup_events", "list_buckets"}, {C::misconfiguration}},
       no_change_approval},
      {{"execution.reverse_shell",
        "Reverse shell: the script pushed to {instance} connects an interactive shell back to {remote}",
        {"lookup_events", "describe_instances"}, {C::malicious_file_execution}},
       reverse_shell},
      {{"execution.payload_download",
        "Payload staging: the script pushed to {instance} fetched {url} and piped it into a shell",
        {"lookup_events", "describe_instances"}, {C::malicious_file_execution}},
       payload_download},
      {{"credential_access.instance_profile",
        "Stolen instance credentials: temporary keys of role {role} belonging to {instance} were used from {source_ip}",
        {"lookup_events", "describe_instances"}, {C::malicious_file_execution}},
       instance_profile},
      {{"benign.change_ticket",
        "Change ticket {ticket} documents the work by {principal} on {resource} as an approved change",
        {"lookup_events"}, {}, true},
       benign_change_ticket},
      {{"benign.partner_trust",
        "Role {role} has a standing trust relationship with partner account {source_account}, so the assumption is an expected integration",
        {"lookup_events", "get_role"}, {}, true},
       benign_partner_trust},
      {{"benign.cicd_pipeline",
        "The calls came from the {role} session that {service} assumes for automated deployments",
        {"lookup_events", "get_role"}, {}, true},
       benign_cicd},
      {{"benign.helpdesk_reset",
        "Help-desk identity {helper} reset the password of {user} shortly before the successful login, matching a routine lockout",
        {"lookup_events", "get_user"}, {}, true},
       benign_helpdesk},
  };
  return table;
}

std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& slots) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    const auto close = tmpl.find('}', open);
    out.append(tmpl.substr(pos, open - pos));
    const std::string name(tmpl.substr(open + 1, close - open - 1));
    const auto it = slots.find(name);
    if (it == slots.end()) throw std::logic_error("rule template slot '" + name + "' not bound");
    out += it->second;
    pos = close + 1;
  }
  return out;
}

}  // namespace

std::span<const RuleInfo> rulebook() {
  static const std::vector<RuleInfo> infos = [] {
    std::vector<RuleInfo> out;
    for (const auto& r : rules()) out.push_back(r.info);
    return out;
  }();
  return infos;
}

const RuleInfo* find_rule(std::string_view rule_id) {
  for (const auto& r : rulebook()) {
    if (r.rule_id == rule_id) return &r;
  }
  return nullptr;
}

GroundTruth extract_ground_truth(const std::vector<TraceEntry>& trace, const telemetry::EventLog& log,
                                 const Alert& alert, const cloud::Environment& env,
                                 const ExtractionOptions& options) {
  Ctx ctx{{}, env, alert};
  std::map<std::size_t, const TraceEntry*> by_position;
  for (const auto& t : trace) {
    const auto pos = log.position_of(t.event_id);
    if (!pos) throw ValidationError("trace." + t.step_id, "event " + t.event_id + " is not in the log");
    by_position[*pos] = &t;
  }
  for (const auto& [pos, t] : by_position) ctx.all.push_back({t, &log[pos]});
  for (const auto& id : alert.triggering_event_ids) {
    if (!log.find(id)) throw ValidationError("alert.triggering_event_ids", "event " + id + " is not in the log");
  }

  GroundTruth gt;
  gt.rulebook_version = std::string(kRulebookVersion);
  gt.verdict = std::any_of(trace.begin(), trace.end(), [](const TraceEntry& t) {
                 return !t.background && t.intent == Intent::malicious;
               })
                   ? Verdict::TP
                   : Verdict::FP;

  for (const auto& rule : rules()) {
    const auto& cats = rule.info.categories;
    if (!cats.empty() && std::find(cats.begin(), cats.end(), options.category) == cats.end()) continue;
    const auto matches = rule.fn(ctx);
    for (std::size_t k = 0; k < matches.size(); ++k) {
      const Match& m = matches[k];
      if (m.events.empty()) continue;  // findings must rest on telemetry
      Finding f;
      f.finding_id = std::string(rule.info.rule_id) + "-" + std::to_string(k + 1);
      f.rule_id = std::string(rule.info.rule_id);
      f.statement = fill(rule.info.statement_template, m.slots);
      std::vector<const CloudEvent*> events = m.events;
      std::sort(events.begin(), events.end(), [&](const CloudEvent* a, const CloudEvent* b) {
        return *log.position_of(a->event_id) < *log.position_of(b->event_id);
      });
      events.erase(std::unique(events.begin(), events.end()), events.end());
      for (const auto* e : events) f.evidence.push_back({EvidenceKind::event_id, e->event_id});
      std::set<std::string> arns_seen;
      for (const auto& a : m.arns) {
        if (!a.empty() && arns_seen.insert(a).second) f.evidence.push_back({EvidenceKind::arn, a});
      }
      f.evidence.push_back({EvidenceKind::timestamp, format_rfc3339(events.front()->event_time)});
      if (events.back()->event_time != events.front()->event_time) {
        f.evidence.push_back({EvidenceKind::timestamp, format_rfc3339(events.back()->event_time)});
      }
      for (auto tool : rule.info.required_tools) f.required_tools.emplace_back(tool);
      f.novel = classify_novel(f, alert, options.tau_alert);
      gt.findings.push_back(std::move(f));
    }
  }
  return gt;
}

}  // namespace irbench::scenario
