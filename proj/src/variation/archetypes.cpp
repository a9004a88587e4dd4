// SPDX-License-Identifier: Apache-2.0
#include "irbench/variation/archetypes.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "irbench/core/errors.hpp"
#include "irbench/core/rng.hpp"
#include "irbench/scenario/builders.hpp"
#include "irbench/scenario/seeds.hpp"
#include "irbench/variation/transforms.hpp"

namespace irbench::variation {

using namespace scenario::build;
using scenario::AttackStep;
using scenario::Intent;
using scenario::ScenarioSpec;
using A = cloud::ActionType;
using C = Category;

std::string_view to_string(FpKind k) {
  switch (k) {
    case FpKind::admin_activity: return "admin_activity";
    case FpKind::intentionally_public: return "intentionally_public";
    case FpKind::cicd_pipeline: return "cicd_pipeline";
    case FpKind::partner_cross_account: return "partner_cross_account";
  }
  return "?";
}

FpKind fp_kind_from_string(std::string_view text) {
  for (auto k : {FpKind::admin_activity, FpKind::intentionally_public, FpKind::cicd_pipeline,
                 FpKind::partner_cross_account}) {
    if (to_string(k) == text) return k;
  }
  throw ValidationError("kind", "unknown archetype '" + std::string(text) + "'");
}

std::vector<FpArchetype> archetypes_for(Category c) {
  const auto admin = FpArchetype{FpKind::admin_activity, {{"category", std::string(to_string(c))}}};
  switch (c) {
    case C::brute_force: return {admin};
    case C::unauthorized_access:
      return {admin, {FpKind::partner_cross_account, {}},
              {FpKind::cicd_pipeline, {{"category", "unauthorized_access"}}}};
    case C::misconfiguration: return {admin, {FpKind::intentionally_public, {}}};
    case C::malicious_file_execution:
      return {admin, {FpKind::cicd_pipeline, {{"category", "malicious_file_execution"}}}};
  }
  return {admin};
}

namespace {

// Alert wording per category, shared with the attack seeds so that an FP
// case looks like its TP counterpart at triage time.
const char* kBfAlert =
    "Possible credential stuffing against IAM user {user}: {failures} failed console sign-ins followed by "
    "a success from {source_ip}.";
const char* kRoleAlert =
    "Role {role} was assumed by {principal} from {source_ip}, an address not seen for this identity before.";
const char* kPublicAlert = "S3 bucket {bucket} now allows public read access through its bucket policy.";
const char* kSgAlert = "Internet-facing ingress detected: {cidr} allowed to reach {group} (port {port}).";
const char* kSsmAlert = "Systems Manager command with a suspicious download was sent to {instance} by {principal}.";
const char* kServiceRoleAlert = "Role {role} was assumed by {source_ip} outside the usual deployment window.";

constexpr std::array<const char*, 6> kOfficeNets = {"198.18.4.", "198.18.7.", "198.19.12.",
                                                    "198.19.40.", "198.18.96.", "198.19.201."};

ScenarioSpec base(const std::string& id, Category c, Rng& rng) {
  ScenarioSpec s;
  s.scenario_id = id;
  s.category = c;
  s.intended_verdict = Verdict::FP;
  // 2024-01-01 plus up to ~250 days, office hours.
  s.start_time = parse_rfc3339("2024-01-01T00:00:00.000Z") + rng.between(0, 250) * kDay +
                 rng.between(8, 17) * kHour + rng.between(0, 59) * kMinute;
  s.env_spec.category = c;
  s.env_spec.provisioned_at = s.start_time - 60 * kDay;
  s.background_events = 20;
  s.lineage = {id};
  return s;
}

std::string office_ip(Rng& rng) {
  return std::string(kOfficeNets[rng.below(kOfficeNets.size())]) + std::to_string(rng.between(10, 250));
}

std::string ticket(Rng& rng) { return "CHG-" + std::to_string(rng.between(10000, 99999)); }

AttackStep benign(AttackStep s) {
  s.intent = Intent::benign;
  return s;
}

AttackStep benign_step(std::string id, scenario::ActorRef actor, A type, cloud::Params params, DurationMs offset,
                       std::vector<std::string> deps = {}) {
  return step(std::move(id), std::move(actor), type, std::move(params), offset, std::move(deps), Intent::benign);
}

void add_instance(ScenarioSpec& s, const std::string& id, const std::string& role) {
  s.env_spec.roles.push_back({"primary", role, {"AmazonS3ReadOnlyAccess", "AmazonSSMManagedInstanceCore"}, {},
                              {"ec2.amazonaws.com"}});
  s.env_spec.security_groups.push_back({"primary", "sg-0b6d1e4f2a9c73815", "app-tier-sg",
                                        {{"tcp", 443, 443, "10.0.0.0/8"}}});
  s.env_spec.instances.push_back({"primary", id, "app-server-1", role, {"sg-0b6d1e4f2a9c73815"},
                                  cloud::InstanceState::running, true});
}

ScenarioSpec admin_bf(Rng& rng) {
  ScenarioSpec s = base("fp-admin-lockout", C::brute_force, rng);
  const std::string ip = office_ip(rng);
  const int failures = static_cast<int>(rng.between(4, 9));
  s.env_spec.users.push_back({"primary", "m.chen", {"ReadOnlyAccess"}, "Winter-2023!", 0, {}});
  s.env_spec.users.push_back({"primary", "helpdesk-ops", {"IAMFullAccess"}, std::nullopt, 1, {}});
  s.steps = {
      trigger(benign(repeated(step("typo", anonymous(ip), A::ConsoleLogin,
                                   {{"userName", "m.chen"}, {"password", "Winter-2024!{rep}"}}, 0),
                              failures, 40 * kSecond))),
      benign_step("reset", user("helpdesk-ops", "key:0", office_ip(rng)), A::UpdateLoginProfile,
                  {{"userName", "m.chen"}, {"password", "Temp-Reset-" + rng.hex(6)}}, 14 * kMinute, {"typo"}),
      trigger(benign(step("login", anonymous(ip), A::ConsoleLogin, {{"userName", "m.chen"}, {"password", ""}},
                          19 * kMinute, {"reset"}))),
      benign_step("browse", user("m.chen", "", ip), A::ListBuckets, {}, 22 * kMinute, {"login"}),
  };
  // The login must use the password the reset set.
  s.steps[2].action.params["password"] = s.steps[1].action.params["password"];
  s.alert_template = kBfAlert;
  return s;
}

ScenarioSpec admin_ua(Rng& rng) {
  ScenarioSpec s = base("fp-admin-maintenance", C::unauthorized_access, rng);
  const std::string ip = office_ip(rng);
  s.env_spec.users.push_back({"primary", "cloud-admin", {}, std::nullopt, 1, {}});
  s.env_spec.roles.push_back({"primary", "maintenance-admin", {"ReadOnlyAccess"},
                              {{cloud::PrincipalKind::user, "primary", "cloud-admin"}}, {}});
  s.env_spec.buckets.push_back({"primary", "ops-runbooks", "private", objects("runbooks/procedure-{rep}.md", 5, 24'000), {}});
  const std::string chg = ticket(rng);
  s.steps = {
      trigger(benign_step("assume", user("cloud-admin", "key:0", ip), A::AssumeRole,
                          {{"roleName", "maintenance-admin"}, {"roleSessionName", chg + "-maintenance"}}, 0)),
      benign_step("buckets", role_session("maintenance-admin", "assume", ip), A::ListBuckets, {}, 3 * kMinute,
                  {"assume"}),
      benign_step("list", role_session("maintenance-admin", "assume", ip), A::ListObjectsV2,
                  {{"bucketName", "ops-runbooks"}}, 5 * kMinute, {"buckets"}),
      benign_step("read", role_session("maintenance-admin", "assume", ip), A::GetObject,
                  {{"bucketName", "ops-runbooks"}, {"key", "runbooks/procedure-2.md"}}, 6 * kMinute, {"list"}),
  };
  s.alert_template = kRoleAlert;
  return s;
}

ScenarioSpec admin_mc(Rng& rng) {
  ScenarioSpec s = base("fp-admin-firewall-change", C::misconfiguration, rng);
  const std::string ip = office_ip(rng);
  s.env_spec.users.push_back({"primary", "netops-admin", {"AmazonEC2FullAccess"}, std::nullopt, 1, {}});
  s.env_spec.security_groups.push_back({"primary", "sg-0d3f8a1b6c2e94750", "vpn-gateway-sg", {}});
  const std::string chg = ticket(rng);
  s.steps = {
      trigger(benign_step("open-vpn", user("netops-admin", "key:0", ip), A::AuthorizeSecurityGroupIngress,
                          {{"groupId", "sg-0d3f8a1b6c2e94750"}, {"port", "443"}, {"cidr", "0.0.0.0/0"},
                           {"description", chg + " public VPN endpoint"}},
                          0)),
      benign_step("verify", user("netops-admin", "key:0", ip), A::DescribeSecurityGroups, {}, 4 * kMinute,
                  {"open-vpn"}),
  };
  s.alert_template = kSgAlert;
  return s;
}

ScenarioSpec admin_mfe(Rng& rng) {
  ScenarioSpec s = base("fp-admin-patching", C::malicious_file_execution, rng);
  const std::string ip = office_ip(rng);
  const std::string inst = "i-0" + rng.hex(16);
  add_instance(s, inst, "app-server-role");
  s.env_spec.users.push_back({"primary", "patch-admin", {"AmazonSSMFullAccess"}, std::nullopt, 1, {}});
  const std::string chg = ticket(rng);
  s.steps = {
      trigger(benign_step("patch", user("patch-admin", "key:0", ip), A::SendCommand,
                          {{"instanceId", inst},
                           {"commands", "curl -fsSL https://packages.internal.example/patch.sh -o /tmp/patch.sh && sh /tmp/patch.sh"},
                           {"comment", chg + " monthly OS patching"}},
                          0)),
      benign_step("check", user("patch-admin", "key:0", ip), A::DescribeInstances, {}, 9 * kMinute, {"patch"}),
  };
  s.alert_template = kSsmAlert;
  return s;
}

ScenarioSpec intentionally_public(Rng& rng) {
  ScenarioSpec s = base("fp-public-website", C::misconfiguration, rng);
  const std::string ip = office_ip(rng);
  s.env_spec.users.push_back({"primary", "web-publisher", {"AmazonS3FullAccess"}, std::nullopt, 1, {}});
  s.env_spec.buckets.push_back({"primary", "marketing-site-assets", "private",
                                objects("site/page-{rep}.html", 8, 40'000), {}});
  const std::string chg = ticket(rng);
  const int reads = static_cast<int>(rng.between(3, 8));
  const std::string visitor = "203.0.113." + std::to_string(rng.between(2, 250));
  s.steps = {
      trigger(benign_step("publish", user("web-publisher", "key:0", ip), A::PutBucketPolicy,
                          {{"bucketName", "marketing-site-assets"}, {"grant", "public-read"}}, 0)),
      benign_step("tag", user("web-publisher", "key:0", ip), A::PutBucketTagging,
                  {{"bucketName", "marketing-site-assets"}, {"tags", "change-ticket=" + chg + ";purpose=public-website"}},
                  2 * kMinute, {"publish"}),
      benign(repeated(step("visit", anonymous(visitor), A::GetObject,
                           {{"bucketName", "marketing-site-assets"}, {"key", "site/page-{rep}.html"}}, 40 * kMinute,
                           {"tag"}),
                      reads, 2 * kMinute)),
  };
  s.alert_template = kPublicAlert;
  return s;
}

ScenarioSpec cicd(Rng& rng, Category c) {
  ScenarioSpec s = base(c == C::unauthorized_access ? "fp-cicd-role" : "fp-cicd-deploy", c, rng);
  const std::string svc = "codebuild.amazonaws.com";
  s.env_spec.roles.push_back({"primary", "codebuild-deploy-role", {"DeployPipelineAccess"}, {}, {svc}});
  s.env_spec.buckets.push_back({"primary", "build-artifacts", "private", objects("releases/app-{rep}.tar.gz", 3, 52'000'000), {}});
  const std::string session = "build-" + std::to_string(rng.between(1000, 9999));
  s.steps = {benign_step("assume", service(svc), A::AssumeRole,
                         {{"roleName", "codebuild-deploy-role"}, {"roleSessionName", session}, {"servicePrincipal", svc}}, 0)};
  const auto as_role = role_session("codebuild-deploy-role", "assume", svc);
  if (c == C::malicious_file_execution) {
    const std::string inst = "i-0" + rng.hex(16);
    add_instance(s, inst, "app-server-role");
    s.steps.push_back(benign_step("fetch", as_role, A::GetObject,
                                  {{"bucketName", "build-artifacts"}, {"key", "releases/app-3.tar.gz"}}, 2 * kMinute, {"assume"}));
    s.steps.push_back(trigger(benign_step(
        "deploy", as_role, A::SendCommand,
        {{"instanceId", inst},
         {"commands", "aws s3 cp s3://build-artifacts/releases/app-3.tar.gz /opt/app/ && systemctl restart app"}},
        4 * kMinute, {"fetch"})));
    s.alert_template = kSsmAlert;
  } else {
    s.steps[0] = trigger(s.steps[0]);
    s.steps.push_back(benign_step("list", as_role, A::ListBuckets, {}, 2 * kMinute, {"assume"}));
    s.steps.push_back(benign_step("upload", as_role, A::PutObject,
                                  {{"bucketName", "build-artifacts"}, {"key", "releases/app-4.tar.gz"}}, 5 * kMinute, {"list"}));
    s.alert_template = kServiceRoleAlert;
  }
  return s;
}

ScenarioSpec partner(Rng& rng) {
  ScenarioSpec s = base("fp-partner-integration", C::unauthorized_access, rng);
  s.env_spec.accounts = {"primary", "partner"};
  s.env_spec.users.push_back({"partner", "integration-bot", {}, std::nullopt, 1, {}});
  s.env_spec.roles.push_back({"primary", "partner-integration-role", {"AmazonS3ReadOnlyAccess"},
                              {{cloud::PrincipalKind::user, "partner", "integration-bot"}}, {}});
  s.env_spec.buckets.push_back({"primary", "partner-shared-exchange", "private",
                                objects("outbound/feed-{rep}.json", 6, 300'000), {}});
  const std::string ip = "192.0.2." + std::to_string(rng.between(2, 250));
  const int reads = static_cast<int>(rng.between(2, 5));
  s.steps = {
      trigger(benign_step("assume", user("integration-bot", "key:0", ip, "partner"), A::AssumeRole,
                          {{"roleName", "partner-integration-role"}, {"roleAccount", "primary"},
                           {"roleSessionName", "nightly-sync"}},
                          0)),
      benign_step("list", role_session("partner-integration-role", "assume", ip), A::ListObjectsV2,
                  {{"bucketName", "partner-shared-exchange"}}, 1 * kMinute, {"assume"}),
      benign(repeated(step("pull", role_session("partner-integration-role", "assume", ip), A::GetObject,
                           {{"bucketName", "partner-shared-exchange"}, {"key", "outbound/feed-{rep}.json"}},
                           2 * kMinute, {"list"}),
                      reads, 30 * kSecond)),
  };
  s.alert_template = kRoleAlert;
  return s;
}

Category param_category(const FpArchetype& a, Category fallback) {
  auto it = a.parameters.find("category");
  if (it == a.parameters.end()) return fallback;
  try {
    return category_from_string(it->second);
  } catch (const ValidationError&) {
    throw ValidationError("parameters.category", "unknown category '" + it->second + "'");
  }
}

}  // namespace

ScenarioSpec generate_false_positive(const FpArchetype& archetype, std::uint64_t seed) {
  Rng rng(mix64(seed ^ 0xf9));
  ScenarioSpec s;
  switch (archetype.kind) {
    case FpKind::admin_activity:
      switch (param_category(archetype, C::brute_force)) {
        case C::brute_force: s = admin_bf(rng); break;
        case C::unauthorized_access: s = admin_ua(rng); break;
        case C::misconfiguration: s = admin_mc(rng); break;
        case C::malicious_file_execution: s = admin_mfe(rng); break;
      }
      break;
    case FpKind::intentionally_public: s = intentionally_public(rng); break;
    case FpKind::cicd_pipeline: {
      const Category c = param_category(archetype, C::malicious_file_execution);
      if (c != C::unauthorized_access && c != C::malicious_file_execution) {
        throw ValidationError("parameters.category", "cicd_pipeline supports unauthorized_access or malicious_file_execution");
      }
      s = cicd(rng, c);
      break;
    }
    case FpKind::partner_cross_account: s = partner(rng); break;
  }
  s.lineage.push_back(std::string(to_string(archetype.kind)));
  return s;
}

ScenarioSpec convert_fp_to_tp(const ScenarioSpec& fp, std::uint64_t seed) {
  const auto seeds = scenario::seeds_for(fp.category);
  if (seeds.empty()) throw ValidationError("category", "no attack seed for " + std::string(to_string(fp.category)));
  Rng rng(mix64(seed ^ 0x7a));
  const ScenarioSpec& attack_seed = seeds[rng.below(seeds.size())];

  // Fresh names for the attack side so nothing collides with the FP spec.
  ScenarioSpec attack;
  const auto taken = resource_names(fp);
  for (;;) {
    attack = rename_resources(attack_seed, rng);
    const auto names = resource_names(attack);
    if (std::none_of(names.begin(), names.end(), [&](const std::string& n) {
          return std::find(taken.begin(), taken.end(), n) != taken.end();
        })) {
      break;
    }
  }

  ScenarioSpec out = fp;
  auto& env = out.env_spec;
  const auto& add = attack.env_spec;
  for (const auto& a : add.accounts) {
    if (std::find(env.accounts.begin(), env.accounts.end(), a) == env.accounts.end()) env.accounts.push_back(a);
  }
  env.users.insert(env.users.end(), add.users.begin(), add.users.end());
  env.roles.insert(env.roles.end(), add.roles.begin(), add.roles.end());
  env.buckets.insert(env.buckets.end(), add.buckets.begin(), add.buckets.end());
  env.security_groups.insert(env.security_groups.end(), add.security_groups.begin(), add.security_groups.end());
  env.instances.insert(env.instances.end(), add.instances.begin(), add.instances.end());

  DurationMs after = 0;
  for (const auto& s : out.steps) after = std::max(after, s.last_offset());
  after += rng.between(20, 90) * kMinute;
  for (auto s : attack.steps) {
    s.step_id = "atk-" + s.step_id;
    for (auto& d : s.depends_on) d = "atk-" + d;
    if (s.actor.credential.rfind("step:", 0) == 0) s.actor.credential = "step:atk-" + s.actor.credential.substr(5);
    s.offset += after;
    s.triggers_alert = false;
    out.steps.push_back(std::move(s));
  }
  out.intended_verdict = Verdict::TP;
  out.scenario_id = fp.scenario_id + "-replayed";
  out.lineage.push_back("convert_fp_to_tp:" + attack_seed.scenario_id);
  return out;
}

}  // namespace irbench::variation
