// SPDX-License-Identifier: Apache-2.0
#include "irbench/scenario/execute.hpp"

#include <algorithm>
#include <set>

#include "irbench/cloud/provision.hpp"
#include "irbench/core/rng.hpp"
#include "irbench/scenario/rulebook.hpp"
#include "irbench/scenario/timeline.hpp"

namespace irbench::scenario {

using telemetry::CloudEvent;
using telemetry::IdentityKind;

namespace {

constexpr DurationMs kAlertDelay = 5 * kMinute;

std::string substitute_rep(std::string value, int rep) {
  const std::string token = "{rep}";
  for (auto pos = value.find(token); pos != std::string::npos; pos = value.find(token, pos)) {
    const std::string n = std::to_string(rep);
    value.replace(pos, token.size(), n);
    pos += n.size();
  }
  return value;
}

struct Runner {
  const ScenarioSpec& spec;
  cloud::Environment env;
  telemetry::EventLog log;
  std::vector<TraceEntry> trace;
  // Log position of the last successful event per step id.
  std::map<std::string, std::size_t> last_event;

  [[noreturn]] void fail(const AttackStep& s, const std::string& what) const {
    throw GenerationError("steps." + s.step_id, what);
  }

  const cloud::Account& account(const AttackStep& s, const std::string& alias) const {
    const cloud::Account* a = env.account(alias);
    if (!a) fail(s, "unknown account '" + alias + "'");
    return *a;
  }

  std::string issued_key(const AttackStep& s, const std::string& step_id) const {
    const auto it = last_event.find(step_id);
    if (it == last_event.end()) fail(s, "credential step '" + step_id + "' has not produced a key");
    const auto& response = log[it->second].response_elements;
    const auto key = response.find("accessKeyId");
    if (key == response.end()) fail(s, "step '" + step_id + "' issued no access key");
    return key->second;
  }

  cloud::Actor resolve(const AttackStep& s) const {
    const ActorRef& ref = s.actor;
    cloud::Actor a;
    a.kind = ref.kind;
    a.source_ip = ref.source_ip;
    const std::string& cred = ref.credential;
    switch (ref.kind) {
      case IdentityKind::iam_user: {
        const cloud::Account& acct = account(s, ref.account);
        const auto it = acct.users.find(ref.user);
        if (it == acct.users.end()) fail(s, "unknown user '" + ref.user + "'");
        a.principal = it->second.arn;
        if (cred.rfind("key:", 0) == 0) {
          const auto n = static_cast<std::size_t>(std::stoul(cred.substr(4)));
          if (n >= it->second.access_keys.size()) fail(s, "user '" + ref.user + "' has no key #" + cred.substr(4));
          a.access_key_id = it->second.access_keys[n].id;
        } else if (cred.rfind("step:", 0) == 0) {
          a.access_key_id = issued_key(s, cred.substr(5));
        } else if (!cred.empty()) {
          fail(s, "unsupported credential '" + cred + "' for an IAM user");
        }
        break;
      }
      case IdentityKind::assumed_role: {
        if (cred.rfind("instance:", 0) == 0) {
          const cloud::Ec2Instance* inst = env.instance(cred.substr(9));
          if (!inst || !inst->profile_session_key) fail(s, "instance '" + cred.substr(9) + "' has no profile session");
          a.principal = *inst->profile;
          a.access_key_id = *inst->profile_session_key;
          a.session_name = inst->instance_id;
        } else if (cred.rfind("step:", 0) == 0) {
          const cloud::Account& acct = account(s, ref.account);
          const auto it = acct.roles.find(ref.role);
          if (it == acct.roles.end()) fail(s, "unknown role '" + ref.role + "'");
          a.principal = it->second.arn;
          a.access_key_id = issued_key(s, cred.substr(5));
        } else {
          fail(s, "assumed_role actors need a step: or instance: credential");
        }
        break;
      }
      case IdentityKind::anonymous:
      case IdentityKind::service:
        break;
    }
    return a;
  }

  void emit(const CloudEvent& e, TraceEntry t) {
    t.event_id = e.event_id;
    log.append(e);
    trace.push_back(std::move(t));
  }
};

struct Background {
  DurationMs offset;
  std::size_t index;
  cloud::ControlAction action;
  cloud::Actor actor;
};

// Read-only requests by generated (undeclared) users of the home account.
std::vector<Background> background_activity(const ScenarioSpec& spec, const cloud::Environment& env,
                                            std::uint64_t seed, DurationMs span) {
  std::vector<Background> out;
  const cloud::Account* home = env.home_account();
  if (spec.background_events == 0 || !home) return out;
  std::set<std::string> declared;
  for (const auto& u : spec.env_spec.users) declared.insert(u.name);
  std::vector<const cloud::IamPrincipal*> users;
  for (const auto& [name, u] : home->users) {
    if (!declared.count(name) && !u.access_keys.empty()) users.push_back(&u);
  }
  if (users.empty()) return out;
  std::vector<std::pair<std::string, std::string>> objects;
  for (const auto& [name, b] : home->buckets) {
    if (spec.env_spec.buckets.end() != std::find_if(spec.env_spec.buckets.begin(), spec.env_spec.buckets.end(),
                                                    [&](const cloud::BucketSpec& d) { return d.name == name; })) {
      continue;
    }
    for (const auto& o : b.objects) objects.emplace_back(name, o.key);
  }

  Rng rng(mix64(seed ^ 0xb4c6));
  for (int k = 0; k < spec.background_events; ++k) {
    const cloud::IamPrincipal& u = *users[rng.below(users.size())];
    Background b;
    b.offset = rng.between(0, span);
    b.index = static_cast<std::size_t>(k);
    b.actor.kind = IdentityKind::iam_user;
    b.actor.principal = u.arn;
    b.actor.access_key_id = u.access_keys.front().id;
    const std::uint64_t h = stable_hash(u.name());
    b.actor.source_ip = "10." + std::to_string(20 + h % 10) + "." + std::to_string((h >> 8) % 256) + "." +
                        std::to_string(2 + (h >> 16) % 250);
    const std::uint64_t pick = rng.below(objects.empty() ? 2 : 4);
    if (pick == 0) {
      b.action = {cloud::ActionType::GetCallerIdentity, {}};
    } else if (pick == 1) {
      b.action = {cloud::ActionType::ListBuckets, {}};
    } else {
      const auto& [bucket, key] = objects[rng.below(objects.size())];
      b.action = pick == 2 ? cloud::ControlAction{cloud::ActionType::ListObjectsV2, {{"bucketName", bucket}}}
                           : cloud::ControlAction{cloud::ActionType::GetObject, {{"bucketName", bucket}, {"key", key}}};
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::string slot_value(const std::string& name, const std::vector<const CloudEvent*>& triggers) {
  const auto first_param = [&](const char* key) -> std::string {
    for (const auto* e : triggers) {
      const auto it = e->request_parameters.find(key);
      if (it != e->request_parameters.end()) return it->second;
    }
    return {};
  };
  const CloudEvent& head = *triggers.front();
  if (name == "user") {
    std::string u = first_param("userName");
    if (u.empty()) {
      for (const auto* e : triggers) {
        if (e->user_identity.kind == IdentityKind::iam_user && e->user_identity.arn) return e->user_identity.arn->resource_name();
      }
    }
    return u;
  }
  if (name == "principal") {
    for (const auto* e : triggers) {
      if (e->user_identity.arn) return e->user_identity.arn->render();
    }
    return {};
  }
  if (name == "role_arn") return first_param("roleArn");
  if (name == "role") {
    const std::string arn = first_param("roleArn");
    if (!arn.empty()) return Arn::parse(arn).resource_name();
    return first_param("roleName");
  }
  if (name == "bucket") return first_param("bucketName");
  if (name == "instance") return first_param("instanceId");
  if (name == "group") return first_param("groupId");
  if (name == "cidr") return first_param("cidrIp");
  if (name == "port") return first_param("fromPort");
  if (name == "access_key") {
    for (const auto* e : triggers) {
      if (e->user_identity.access_key_id) return *e->user_identity.access_key_id;
    }
    return {};
  }
  if (name == "source_ip") return head.source_ip;
  if (name == "account") {
    for (const auto* e : triggers) {
      if (e->user_identity.account_id) return *e->user_identity.account_id;
    }
    return {};
  }
  if (name == "region") return head.region;
  if (name == "event_name") return head.event_name;
  if (name == "count") return std::to_string(triggers.size());
  if (name == "failures") {
    return std::to_string(std::count_if(triggers.begin(), triggers.end(),
                                        [](const CloudEvent* e) { return !e->succeeded(); }));
  }
  if (name == "first_time") return format_rfc3339(head.event_time);
  if (name == "last_time") return format_rfc3339(triggers.back()->event_time);
  throw GenerationError("alert_template", "unknown slot '{" + name + "}'");
}

}  // namespace

std::string instantiate_alert(const std::string& tmpl, const std::vector<const CloudEvent*>& triggers) {
  if (triggers.empty()) throw GenerationError("alert_template", "no triggering events");
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find('{', pos);
    if (open == std::string::npos) {
      out += tmpl.substr(pos);
      break;
    }
    const auto close = tmpl.find('}', open);
    if (close == std::string::npos) throw GenerationError("alert_template", "unterminated slot");
    out += tmpl.substr(pos, open - pos);
    const std::string name = tmpl.substr(open + 1, close - open - 1);
    const std::string value = slot_value(name, triggers);
    if (value.empty()) throw GenerationError("alert_template", "slot '{" + name + "}' has no value");
    out += value;
    pos = close + 1;
  }
  return out;
}

Execution execute_scenario(const ScenarioSpec& spec, std::uint64_t seed, std::string case_id) {
  validate(spec);
  if (case_id.empty()) case_id = spec.scenario_id;

  Runner run{spec, cloud::provision_environment(spec.env_spec, mix64(seed ^ 0xe4f1)), {}, {}, {}};

  const auto occurrences = schedule(spec.steps);
  const DurationMs span = std::max<DurationMs>(kHour, occurrences.back().offset);
  const auto background = background_activity(spec, run.env, seed, span);

  // Merge scenario steps and background requests by time; scenario steps
  // first on ties.
  std::size_t bi = 0;
  std::vector<std::size_t> bg_order(background.size());
  for (std::size_t k = 0; k < bg_order.size(); ++k) bg_order[k] = k;
  std::stable_sort(bg_order.begin(), bg_order.end(),
                   [&](std::size_t a, std::size_t b) { return background[a].offset < background[b].offset; });

  const auto run_background = [&](const Background& b) {
    CloudEvent e = cloud::apply_control_action(run.env, b.action, b.actor, spec.start_time + b.offset);
    run.emit(e, TraceEntry{"bg-" + std::to_string(b.index + 1), 1, Intent::benign, false, true, {}});
  };

  for (const auto& occ : occurrences) {
    while (bi < bg_order.size() && background[bg_order[bi]].offset < occ.offset) run_background(background[bg_order[bi++]]);
    const AttackStep& s = spec.steps[occ.step_index];
    cloud::ControlAction action = s.action;
    for (auto& [k, v] : action.params) v = substitute_rep(v, occ.repetition);
    const cloud::Actor actor = run.resolve(s);
    CloudEvent e;
    try {
      e = cloud::apply_control_action(run.env, action, actor, spec.start_time + occ.offset);
    } catch (const ValidationError& err) {
      run.fail(s, err.what());
    }
    run.emit(e, TraceEntry{s.step_id, occ.repetition, s.intent, s.triggers_alert, false, {}});
    if (e.succeeded()) run.last_event[s.step_id] = run.log.size() - 1;
  }
  while (bi < bg_order.size()) run_background(background[bg_order[bi++]]);

  Alert alert;
  std::vector<const CloudEvent*> triggers;
  for (const auto& t : run.trace) {
    if (!t.triggers_alert) continue;
    triggers.push_back(run.log.find(t.event_id));
    alert.triggering_event_ids.push_back(t.event_id);
  }
  alert.category = spec.category;
  alert.description = instantiate_alert(spec.alert_template, triggers);
  alert.fired_at = triggers.back()->event_time + kAlertDelay;
  Rng alert_rng(mix64(seed ^ stable_hash(case_id)));
  alert.alert_id = "alert-" + alert_rng.hex(12);

  Execution out;
  out.trace = std::move(run.trace);
  out.bundle.ground_truth =
      extract_ground_truth(out.trace, run.log, alert, run.env, ExtractionOptions{kDefaultTauAlert, spec.category});
  out.bundle.manifest = {case_id, spec.scenario_id, spec.category, seed, spec.lineage,
                         std::string(kRulebookVersion)};
  out.bundle.environment = std::move(run.env);
  out.bundle.log = std::move(run.log);
  out.bundle.alert = std::move(alert);
  return out;
}

}  // namespace irbench::scenario
