// SPDX-License-Identifier: Apache-2.0
#include "irbench/harness/agents.hpp"

#include <algorithm>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "irbench/core/rng.hpp"
#include "irbench/scenario/bundle.hpp"
#include "irbench/telemetry/jsonl.hpp"

namespace irbench::harness {

std::vector<std::string> default_expected_tools(Category c) {
  std::vector<std::string> tools = {"lookup_events"};
  switch (c) {
    case Category::brute_force:
      tools.push_back("list_users");
      break;
    case Category::unauthorized_access:
      tools.insert(tools.end(), {"list_roles", "list_buckets"});
      break;
    case Category::misconfiguration:
      tools.insert(tools.end(), {"get_bucket_policy", "describe_security_groups"});
      break;
    case Category::malicious_file_execution:
      tools.insert(tools.end(), {"describe_instances", "describe_security_groups"});
      break;
  }
  tools.push_back("get_cost_and_usage");
  return tools;
}

// ---- client plumbing ----

std::optional<ojson> AgentClient::start() {
  for (;;) {
    auto msg = ch_.receive();
    if (!msg) return std::nullopt;
    if (msg->is_object() && string_or(*msg, "type", "") == "case_start") return msg;
  }
}

ToolResult AgentClient::call(const std::string& tool, ojson parameters) {
  ToolCall c{"c" + std::to_string(next_id_++), tool, std::move(parameters)};
  ch_.send(tool_call_to_json(c));
  for (;;) {
    auto msg = ch_.receive();
    if (!msg) throw SessionClosed{};
    if (string_or(*msg, "type", "") != "tool_result") continue;
    ToolResult r = tool_result_from_json(*msg);
    if (r.call_id == c.call_id) return r;
  }
}

void AgentClient::report(const InvestigationReport& r) {
  ch_.send({{"type", "final_report"}, {"report", report_to_json(r)}});
}

void StreamChannel::send(const ojson& message) {
  out_ << message.dump() << '\n';
  out_.flush();
}

std::optional<ojson> StreamChannel::receive() {
  std::string line;
  while (std::getline(in_, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return ojson::parse(line);
  }
  return std::nullopt;
}

namespace {

using scenario::Alert;
using scenario::EvidenceArtifact;
using scenario::EvidenceKind;
using telemetry::CloudEvent;

struct CaseInfo {
  std::string case_id;
  Alert alert;
};

CaseInfo case_info(const ojson& start) {
  return {get_string(start, "case_id"), scenario::alert_from_json(field(start, "alert"))};
}

std::vector<CloudEvent> all_events(AgentClient& client, std::size_t max_calls) {
  std::vector<CloudEvent> out;
  ojson params = {{"max_results", 1000}};
  for (std::size_t i = 0; i < max_calls; ++i) {
    const ToolResult r = client.call("lookup_events", params);
    if (!r.ok) break;
    for (const auto& e : get_array(r.payload, "events")) out.push_back(telemetry::event_from_json(e));
    const ojson& token = r.payload.at("next_page_token");
    if (token.is_null()) break;
    params["page_token"] = token;
  }
  return out;
}

// Calls each tool once, filling required parameters from earlier listings.
void exercise_tools(AgentClient& client, const std::vector<std::string>& tools) {
  std::optional<ojson> buckets, users, roles;
  const auto first_name = [](const std::optional<ojson>& listing, const char* array, const char* key) {
    if (listing && listing->contains(array) && !listing->at(array).empty()) {
      return listing->at(array).front().at(key).get<std::string>();
    }
    return std::string("unknown");
  };
  const auto listing = [&](std::optional<ojson>& slot, const char* tool) {
    if (!slot) {
      ToolResult r = client.call(tool);
      slot = r.ok ? r.payload : ojson::object();
    }
  };
  for (const auto& t : tools) {
    if (t == "lookup_events") {
      client.call(t, {{"max_results", 50}});
    } else if (t == "get_bucket_policy" || t == "list_objects") {
      listing(buckets, "list_buckets");
      client.call(t, {{"bucket_name", first_name(buckets, "buckets", "name")}});
    } else if (t == "get_user") {
      listing(users, "list_users");
      client.call(t, {{"user_name", first_name(users, "users", "user_name")}});
    } else if (t == "get_role" || t == "list_role_policies") {
      listing(roles, "list_roles");
      client.call(t, {{"role_name", first_name(roles, "roles", "role_name")}});
    } else if (t == "list_buckets") {
      listing(buckets, "list_buckets");
    } else if (t == "list_users") {
      listing(users, "list_users");
    } else if (t == "list_roles") {
      listing(roles, "list_roles");
    } else {
      client.call(t);
    }
  }
}

// Runs body; a closed session just ends the agent.
Agent guarded(std::function<void(AgentClient&, const ojson&)> body) {
  return [body = std::move(body)](Channel& ch) {
    AgentClient client(ch);
    auto start = client.start();
    if (!start) return;
    try {
      body(client, *start);
    } catch (const AgentClient::SessionClosed&) {
    }
  };
}

EvidenceArtifact event_ref(const CloudEvent& e) { return {EvidenceKind::event_id, e.event_id}; }

std::string param(const CloudEvent& e, const std::string& key) {
  auto it = e.request_parameters.find(key);
  return it == e.request_parameters.end() ? "" : it->second;
}

std::string principal_of(const CloudEvent& e) {
  if (e.user_identity.arn) return e.user_identity.arn->render();
  return e.source_ip;
}

}  // namespace

Agent oracle_agent(GroundTruthSource truth) {
  return guarded([truth = std::move(truth)](AgentClient& client, const ojson& start) {
    const CaseInfo info = case_info(start);
    const auto gt = truth(info.case_id);
    if (!gt) throw Error("oracle: no ground truth for case '" + info.case_id + "'");
    std::vector<std::string> tools = default_expected_tools(info.alert.category);
    for (const auto& f : gt->findings) {
      for (const auto& t : f.required_tools) {
        if (std::find(tools.begin(), tools.end(), t) == tools.end()) tools.push_back(t);
      }
    }
    exercise_tools(client, tools);
    InvestigationReport r;
    r.case_id = info.case_id;
    r.verdict = gt->verdict;
    for (const auto& f : gt->findings) r.claims.push_back({f.statement, f.evidence});
    r.narrative = "Ground truth replayed.";
    client.report(r);
  });
}

Agent parrot_agent() {
  return guarded([](AgentClient& client, const ojson& start) {
    const CaseInfo info = case_info(start);
    InvestigationReport r;
    r.case_id = info.case_id;
    r.verdict = Verdict::TP;
    Claim c{info.alert.description, {}};
    for (const auto& id : info.alert.triggering_event_ids) c.evidence_refs.push_back({EvidenceKind::event_id, id});
    r.claims.push_back(std::move(c));
    client.report(r);
  });
}

Agent random_agent(std::uint64_t seed) {
  return guarded([seed](AgentClient& client, const ojson& start) {
    const CaseInfo info = case_info(start);
    Rng rng(mix64(seed ^ stable_hash(info.case_id)));
    static const std::vector<std::string> free_tools = {"lookup_events", "list_users", "list_roles", "list_buckets",
                                                        "describe_instances", "describe_security_groups",
                                                        "get_cost_and_usage"};
    const int calls = static_cast<int>(rng.below(6));
    std::vector<std::string> ids;
    for (int i = 0; i < calls; ++i) {
      const std::string& tool = rng.pick(std::span<const std::string>(free_tools));
      const ToolResult r = client.call(tool);
      if (r.ok && tool == "lookup_events") {
        for (const auto& e : get_array(r.payload, "events")) ids.push_back(get_string(e, "event_id"));
      }
    }
    InvestigationReport r;
    r.case_id = info.case_id;
    r.verdict = rng.chance(1, 2) ? Verdict::TP : Verdict::FP;
    if (!ids.empty()) {
      const std::string& id = rng.pick(std::span<const std::string>(ids));
      r.claims.push_back({"Suspicious activity recorded in event " + id, {{EvidenceKind::event_id, id}}});
    }
    client.report(r);
  });
}

namespace {

struct Heuristic {
  const Alert& alert;
  const std::vector<CloudEvent>& events;
  std::set<std::string> suspects;  // principal ARNs, access keys, source IPs
  std::vector<Claim> claims;

  bool suspicious(const CloudEvent& e) const {
    if (suspects.count(e.source_ip)) return true;
    if (e.user_identity.arn && suspects.count(e.user_identity.arn->render())) return true;
    return e.user_identity.access_key_id && suspects.count(*e.user_identity.access_key_id);
  }

  void seed_suspects() {
    for (const auto& e : events) {
      if (std::find(alert.triggering_event_ids.begin(), alert.triggering_event_ids.end(), e.event_id) ==
          alert.triggering_event_ids.end()) {
        continue;
      }
      suspects.insert(e.source_ip);
      if (e.user_identity.arn) suspects.insert(e.user_identity.arn->render());
    }
    // Credentials handed out to suspects become suspects too.
    for (const auto& e : events) {
      if (!suspicious(e)) continue;
      for (const char* key : {"accessKeyId", "userArn", "arn"}) {
        if (auto it = e.response_elements.find(key); it != e.response_elements.end()) suspects.insert(it->second);
      }
    }
  }

  bool benign_markers() const {
    for (const auto& e : events) {
      if (!suspicious(e)) continue;
      if (e.user_identity.kind == telemetry::IdentityKind::service) return true;
      for (const auto& [k, v] : e.request_parameters) {
        if (v.find("CHG-") != std::string::npos || v.find("change-ticket") != std::string::npos) return true;
      }
    }
    // Password reset by someone else right before the alert: a lockout.
    for (const auto& e : events) {
      if (e.event_name == "UpdateLoginProfile" && e.event_time <= alert.fired_at &&
          alert.fired_at - e.event_time < kHour && !suspicious(e)) {
        return true;
      }
    }
    return false;
  }

  void claim(std::string statement, std::vector<EvidenceArtifact> refs) {
    claims.push_back({std::move(statement), std::move(refs)});
  }

  void derive() {
    std::map<std::string, std::vector<const CloudEvent*>> reads;  // bucket -> GetObject
    std::vector<const CloudEvent*> enumeration;
    for (const auto& e : events) {
      if (!suspicious(e) || !e.succeeded()) continue;
      const std::string& n = e.event_name;
      const std::string who = principal_of(e);
      if (n == "CreateUser") {
        claim("Attacker created IAM user " + param(e, "userName") + " to keep access", {event_ref(e)});
      } else if (n == "CreateAccessKey") {
        claim("A new access key was issued for " + who, {event_ref(e)});
      } else if (n == "AttachUserPolicy" || n == "AttachRolePolicy") {
        std::string policy = param(e, "policyArn");
        if (policy.empty()) policy = param(e, "policyName");
        policy = policy.substr(policy.rfind('/') + 1);
        const std::string target = n == "AttachUserPolicy" ? param(e, "userName") : param(e, "roleName");
        claim("Privilege escalation: " + target + " received the " + policy + " managed policy", {event_ref(e)});
      } else if (n == "AssumeRole") {
        claim("Role " + param(e, "roleName") + " was assumed by " + who + " from " + e.source_ip, {event_ref(e)});
      } else if (n == "GetObject" || n == "SelectObjectContent") {
        reads[param(e, "bucketName")].push_back(&e);
      } else if (n == "ListUsers" || n == "ListRoles" || n == "GetAccountAuthorizationDetails" ||
                 n == "ListBuckets") {
        enumeration.push_back(&e);
      } else if (n == "AuthorizeSecurityGroupIngress" || n == "ModifySecurityGroupRules") {
        claim("Network exposure: firewall group " + param(e, "groupId") + " was changed to admit " +
                  param(e, "cidr") + " on port " + param(e, "port"),
              {event_ref(e)});
      } else if (n == "PutBucketPolicy") {
        claim("The policy on " + param(e, "bucketName") + " was set to " + param(e, "grant") + " by " + who,
              {event_ref(e)});
      } else if (n == "SendCommand" || n == "CreateAssociation") {
        const std::string cmd = param(e, "commands");
        const std::string instance = param(e, "instanceId");
        if (cmd.find("/dev/tcp") != std::string::npos || cmd.find("nc ") != std::string::npos) {
          claim("Reverse shell: the script pushed to " + instance + " connects a shell back to a remote host",
                {event_ref(e)});
        } else if (cmd.find("curl") != std::string::npos || cmd.find("wget") != std::string::npos) {
          claim("Payload staging: the script pushed to " + instance + " downloaded and ran a remote file",
                {event_ref(e)});
        } else {
          claim("Commands were pushed to " + instance + " by " + who, {event_ref(e)});
        }
      }
    }
    if (!enumeration.empty()) {
      std::vector<EvidenceArtifact> refs;
      for (const auto* e : enumeration) refs.push_back(event_ref(*e));
      claim("The identity " + principal_of(*enumeration.front()) + " enumerated IAM principals and buckets",
            std::move(refs));
    }
    for (const auto& [bucket, list] : reads) {
      std::vector<EvidenceArtifact> refs;
      for (const auto* e : list) refs.push_back(event_ref(*e));
      claim("Data exfiltration: " + std::to_string(list.size()) + " objects were read from " + bucket + " by " +
                list.front()->source_ip,
            std::move(refs));
    }
  }
};

}  // namespace

Agent keyword_agent() {
  return guarded([](AgentClient& client, const ojson& start) {
    const CaseInfo info = case_info(start);
    const auto events = all_events(client, 10);
    exercise_tools(client, default_expected_tools(info.alert.category));
    Heuristic h{info.alert, events, {}, {}};
    h.seed_suspects();
    InvestigationReport r;
    r.case_id = info.case_id;
    if (h.benign_markers()) {
      r.verdict = Verdict::FP;
      r.narrative = "Activity carries change-management or automation markers.";
    } else {
      r.verdict = Verdict::TP;
      h.derive();
      r.claims = std::move(h.claims);
    }
    client.report(r);
  });
}

Agent loop_agent() {
  return guarded([](AgentClient& client, const ojson&) {
    for (;;) client.call("list_users");
  });
}

Agent crash_agent() {
  return guarded([](AgentClient&, const ojson&) -> void { throw Error("crash agent: deliberate failure"); });
}

Agent silent_agent() {
  return guarded([](AgentClient&, const ojson&) {});
}

const std::vector<std::string>& reference_agent_names() {
  static const std::vector<std::string> names = {"oracle", "parrot", "random", "keyword", "loop", "crash", "silent"};
  return names;
}

Agent make_reference_agent(const std::string& name, const std::string& corpus, std::uint64_t seed) {
  if (name == "oracle") {
    if (corpus.empty()) throw ValidationError("corpus", "the oracle agent needs the corpus directory");
    std::filesystem::path root(corpus);
    if (std::filesystem::is_directory(root / "cases")) root /= "cases";
    return oracle_agent([root](const std::string& id) -> std::optional<scenario::GroundTruth> {
      const auto path = root / id / scenario::kGroundTruthFile;
      if (!std::filesystem::exists(path)) return std::nullopt;
      return scenario::ground_truth_from_json(parse_document(read_file(path), path.string()));
    });
  }
  if (name == "parrot") return parrot_agent();
  if (name == "random") return random_agent(seed);
  if (name == "keyword") return keyword_agent();
  if (name == "loop") return loop_agent();
  if (name == "crash") return crash_agent();
  if (name == "silent") return silent_agent();
  throw ValidationError("agent", "unknown reference agent '" + name + "'");
}

}  // namespace irbench::harness
