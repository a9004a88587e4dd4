// SPDX-License-Identifier: Apache-2.0
#include "irbench/cloud/policy.hpp"

#include <algorithm>
#include <map>

#include "irbench/core/arn.hpp"
#include "irbench/core/errors.hpp"

namespace irbench::cloud {

bool glob_match(std::string_view pattern, std::string_view text) {
  // Iterative '*' matcher with single backtrack point.
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (p < pattern.size() && pattern[p] == text[t]) {
      ++p;
      ++t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

namespace {

bool any_match(const std::vector<std::string>& patterns, std::string_view text) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const std::string& p) { return glob_match(p, text); });
}

}  // namespace

bool allows(const PolicyDoc& policy, std::string_view action, std::string_view resource_arn) {
  return std::any_of(policy.statements.begin(), policy.statements.end(), [&](const auto& s) {
    return any_match(s.actions, action) && any_match(s.resources, resource_arn);
  });
}

bool grants(const PolicyDoc& policy, std::string_view action, std::string_view caller_arn,
            std::string_view caller_account) {
  return std::any_of(policy.statements.begin(), policy.statements.end(), [&](const auto& s) {
    if (!any_match(s.actions, action)) return false;
    return std::any_of(s.principals.begin(), s.principals.end(), [&](const std::string& p) {
      return p == "*" || (!caller_arn.empty() && p == caller_arn) ||
             (!caller_account.empty() && p == caller_account);
    });
  });
}

bool grants_anonymous_read(const PolicyDoc& policy) {
  return grants(policy, "s3:GetObject", "", "");
}

bool is_admin(const PolicyDoc& policy) {
  return std::any_of(policy.statements.begin(), policy.statements.end(), [](const auto& s) {
    return std::find(s.actions.begin(), s.actions.end(), "*") != s.actions.end() &&
           std::find(s.resources.begin(), s.resources.end(), "*") != s.resources.end();
  });
}

namespace {

const std::map<std::string, PolicyDoc, std::less<>>& catalog() {
  static const auto* table = [] {
    auto* m = new std::map<std::string, PolicyDoc, std::less<>>;
    const auto add = [&](const std::string& name, std::vector<std::string> actions) {
      (*m)[name] = PolicyDoc{name, {PolicyStatement{std::move(actions), {"*"}, {}}}};
    };
    add("AdministratorAccess", {"*"});
    add("PowerUserAccess", {"s3:*", "ec2:*", "ssm:*", "sts:*", "iam:Get*", "iam:List*"});
    add("ReadOnlyAccess", {"iam:Get*", "iam:List*", "s3:Get*", "s3:List*", "ec2:Describe*",
                           "ssm:Describe*", "ssm:List*", "sts:GetCallerIdentity"});
    add("SecurityAudit", {"iam:Get*", "iam:List*", "s3:GetBucket*", "s3:ListAllMyBuckets",
                          "ec2:Describe*"});
    add("IAMFullAccess", {"iam:*"});
    add("AmazonS3FullAccess", {"s3:*"});
    add("AmazonS3ReadOnlyAccess", {"s3:Get*", "s3:List*"});
    add("AmazonEC2FullAccess", {"ec2:*"});
    add("AmazonSSMFullAccess", {"ssm:*", "ec2:Describe*"});
    add("AmazonSSMManagedInstanceCore", {"ssm:UpdateInstanceInformation", "ssm:ListAssociations",
                                         "s3:GetObject"});
    add("DeployPipelineAccess", {"ssm:SendCommand", "ssm:CreateAssociation", "ec2:Describe*",
                                 "s3:GetObject", "s3:PutObject", "s3:ListBucket"});
    return m;
  }();
  return *table;
}

}  // namespace

std::optional<PolicyDoc> managed_policy(std::string_view name) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& managed_policy_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : catalog()) out.push_back(k);
    return out;
  }();
  return names;
}

PolicyDoc bucket_policy_for_grant(std::string_view bucket_arn, std::string_view grant) {
  PolicyDoc doc{"BucketPolicy", {}};
  if (grant == "private") return doc;
  const std::vector<std::string> read = {"s3:GetObject", "s3:ListBucket"};
  if (grant == "public-read") {
    doc.statements.push_back({read, {std::string(bucket_arn)}, {"*"}});
    return doc;
  }
  if (grant.substr(0, 8) == "account:" && is_account_id(grant.substr(8))) {
    doc.statements.push_back({read, {std::string(bucket_arn)}, {std::string(grant.substr(8))}});
    return doc;
  }
  throw ValidationError("grant", "unknown bucket grant '" + std::string(grant) + "'");
}

}  // namespace irbench::cloud
