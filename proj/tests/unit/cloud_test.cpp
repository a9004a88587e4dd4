// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "irbench/cloud/actions.hpp"
#include "irbench/cloud/provision.hpp"
#include "irbench/cloud/serialize.hpp"

using namespace irbench;
using namespace irbench::cloud;

namespace {

constexpr Timestamp kT0 = 1'710'000'000'000;

EnvironmentSpec small_spec() {
  EnvironmentSpec s;
  s.category = Category::unauthorized_access;
  s.provisioned_at = kT0 - kDay;
  s.users = {{"primary", "alice", {"ReadOnlyAccess"}, "hunter2", 1, {}},
             {"primary", "mallory", {}, std::nullopt, 1, {}}};
  s.roles = {{"primary", "DataAdmin", {"AmazonS3FullAccess"}, {{PrincipalKind::user, "primary", "alice"}}, {}}};
  s.buckets = {{"primary", "payroll-exports", "private", {{"2024/q1.csv", 1000}}, {}}};
  s.filler = {0, 0, 0, 0, 0, 0};
  return s;
}

Actor user_actor(const Environment& env, const std::string& name) {
  const IamPrincipal& u = env.home_account()->users.at(name);
  return {telemetry::IdentityKind::iam_user, u.arn, u.access_keys.front().id, "", "198.51.100.4"};
}

}  // namespace

TEST(Provision, DeterministicInSeed) {
  EXPECT_EQ(provision_environment(small_spec(), 1), provision_environment(small_spec(), 1));
  EXPECT_NE(provision_environment(small_spec(), 1).home_account()->id,
            provision_environment(small_spec(), 2).home_account()->id);
  EXPECT_TRUE(dangling_references(provision_environment(small_spec(), 1)).empty());
}

TEST(Provision, RejectsDanglingNames) {
  EnvironmentSpec s = small_spec();
  s.roles[0].trusted = {{PrincipalKind::user, "primary", "nobody"}};
  EXPECT_THROW(validate(s), ValidationError);
  s = small_spec();
  s.users[0].policies = {"NoSuchPolicy"};
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Actions, ConsoleLoginChecksPassword) {
  Environment env = provision_environment(small_spec(), 3);
  Actor anon{telemetry::IdentityKind::anonymous, std::nullopt, std::nullopt, "", "203.0.113.9"};
  auto bad = apply_control_action(env, {ActionType::ConsoleLogin, {{"userName", "alice"}, {"password", "x"}}}, anon, kT0);
  EXPECT_EQ(bad.error_code, "FailedAuthentication");
  EXPECT_EQ(bad.response_elements.at("ConsoleLogin"), "Failure");
  EXPECT_EQ(bad.request_parameters.count("password"), 0u);
  auto good =
      apply_control_action(env, {ActionType::ConsoleLogin, {{"userName", "alice"}, {"password", "hunter2"}}}, anon, kT0 + 1);
  EXPECT_TRUE(good.succeeded());
}

TEST(Actions, DenialLeavesStateUntouched) {
  Environment env = provision_environment(small_spec(), 4);
  const Environment before = env;
  auto e = apply_control_action(env, {ActionType::AssumeRole, {{"roleName", "DataAdmin"}, {"roleSessionName", "s"}}},
                                user_actor(env, "mallory"), kT0);
  EXPECT_EQ(e.error_code, "AccessDenied");
  EXPECT_EQ(env.sessions, before.sessions);
  EXPECT_EQ(env.accounts, before.accounts);
  EXPECT_EQ(env.sequence, before.sequence + 1);
}

TEST(Actions, TrustedAssumeRoleIssuesSession) {
  Environment env = provision_environment(small_spec(), 5);
  auto e = apply_control_action(env, {ActionType::AssumeRole, {{"roleName", "DataAdmin"}, {"roleSessionName", "s"}}},
                                user_actor(env, "alice"), kT0);
  ASSERT_TRUE(e.succeeded());
  const std::string key = e.response_elements.at("accessKeyId");
  ASSERT_NE(env.session(key), nullptr);
  EXPECT_EQ(env.session(key)->role.resource_name(), "DataAdmin");
}

TEST(Actions, PublicFlagMirrorsPolicy) {
  Environment env = provision_environment(small_spec(), 6);
  EXPECT_FALSE(env.bucket("payroll-exports")->is_public);
  // Alice is read-only: the write is denied.
  auto denied = apply_control_action(
      env, {ActionType::PutBucketPolicy, {{"bucketName", "payroll-exports"}, {"grant", "public-read"}}},
      user_actor(env, "alice"), kT0);
  EXPECT_FALSE(denied.succeeded());
  EXPECT_FALSE(env.bucket("payroll-exports")->is_public);
  env.account("primary")->users.at("alice").attached_policies.push_back(*managed_policy("AdministratorAccess"));
  auto ok = apply_control_action(
      env, {ActionType::PutBucketPolicy, {{"bucketName", "payroll-exports"}, {"grant", "public-read"}}},
      user_actor(env, "alice"), kT0 + 1);
  EXPECT_TRUE(ok.succeeded());
  const S3Bucket& b = *env.bucket("payroll-exports");
  EXPECT_TRUE(b.is_public);
  EXPECT_EQ(b.is_public, grants_anonymous_read(b.policy));
}

TEST(Actions, ErrorsLeaveEnvironmentUnchanged) {
  Environment env = provision_environment(small_spec(), 7);
  const Environment before = env;
  EXPECT_THROW(apply_control_action(env, {ActionType::GetObject, {{"bucketName", "nope"}, {"key", "k"}}},
                                    user_actor(env, "alice"), kT0),
               UnknownResourceError);
  EXPECT_THROW(apply_control_action(env, {ActionType::GetObject, {{"bucketName", "payroll-exports"}}},
                                    user_actor(env, "alice"), kT0),
               ValidationError);
  EXPECT_EQ(env, before);
  apply_control_action(env, {ActionType::ListBuckets, {}}, user_actor(env, "alice"), kT0);
  EXPECT_THROW(apply_control_action(env, {ActionType::ListBuckets, {}}, user_actor(env, "alice"), kT0 - 1),
               ValidationError);
}

TEST(Lookup, ResolvesEveryProvisionedResource) {
  const Environment env = provision_environment(small_spec(), 8);
  const Account& a = *env.home_account();
  EXPECT_TRUE(lookup_resource(env, a.users.at("alice").arn));
  EXPECT_TRUE(lookup_resource(env, a.roles.at("DataAdmin").arn));
  EXPECT_TRUE(lookup_resource(env, Arn::bucket(a.id, "payroll-exports")));
  EXPECT_FALSE(lookup_resource(env, Arn::iam_user(a.id, "ghost")));
  EXPECT_FALSE(lookup_resource(env, Arn::iam_user("999999999999", "alice")));
  EXPECT_THROW(lookup_resource(env, "not-an-arn"), ParseError);
}

TEST(Policy, GlobsAndAdmin) {
  EXPECT_TRUE(glob_match("s3:*", "s3:GetObject"));
  EXPECT_TRUE(glob_match("arn:aws:s3:::data/*", "arn:aws:s3:::data/a/b"));
  EXPECT_FALSE(glob_match("s3:Get*", "s3:PutObject"));
  EXPECT_TRUE(is_admin(*managed_policy("AdministratorAccess")));
  EXPECT_FALSE(is_admin(*managed_policy("ReadOnlyAccess")));
  EXPECT_FALSE(managed_policy("Made-Up"));
}

TEST(Policy, AwsDocumentShape) {
  const ojson doc = aws_policy_document(*managed_policy("AdministratorAccess"));
  EXPECT_EQ(doc.at("Version"), "2012-10-17");
  EXPECT_FALSE(doc.at("Statement").at(0).contains("Principal"));
  const ojson pub = aws_policy_document(bucket_policy_for_grant("arn:aws:s3:::b", "public-read"));
  EXPECT_TRUE(pub.at("Statement").at(0).contains("Principal"));
}
