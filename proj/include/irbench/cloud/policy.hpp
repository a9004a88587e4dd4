// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace irbench::cloud {

// Allow-only statement. Actions are "service:Name" patterns and resources
// are ARN patterns; both support '*' globs. `principals` is used only by
// resource and trust policies: "*" (anyone, including anonymous callers), an
// ARN, a 12-digit account id, or a service name such as
// "codebuild.amazonaws.com".
struct PolicyStatement {
  std::vector<std::string> actions;
  std::vector<std::string> resources;
  std::vector<std::string> principals;

  friend bool operator==(const PolicyStatement&, const PolicyStatement&) = default;
};

struct PolicyDoc {
  std::string name;
  std::vector<PolicyStatement> statements;

  friend bool operator==(const PolicyDoc&, const PolicyDoc&) = default;
};

bool glob_match(std::string_view pattern, std::string_view text);

// Identity-policy evaluation: some statement covers both action and resource.
bool allows(const PolicyDoc& policy, std::string_view action, std::string_view resource_arn);

// Resource-policy evaluation for a caller. `caller_arn` and `caller_account`
// are empty for anonymous callers.
bool grants(const PolicyDoc& policy, std::string_view action, std::string_view caller_arn,
            std::string_view caller_account);

// True when the policy lets anonymous callers read objects.
bool grants_anonymous_read(const PolicyDoc& policy);

// True when some statement allows every action on every resource.
bool is_admin(const PolicyDoc& policy);

// AWS-managed style policies referenced by name in specs and actions
// (AdministratorAccess, ReadOnlyAccess, AmazonS3FullAccess, ...).
std::optional<PolicyDoc> managed_policy(std::string_view name);
const std::vector<std::string>& managed_policy_names();

// Bucket policy for a grant keyword: "private", "public-read", or
// "account:<12 digits>".
PolicyDoc bucket_policy_for_grant(std::string_view bucket_arn, std::string_view grant);

}  // namespace irbench::cloud
