// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace irbench {

// Resource identifier of the form
//   arn:<partition>:<service>:<region>:<account-id>:<path/segments>
// The account id is always exactly twelve decimal digits; region may be empty
// for global services.
struct Arn {
  std::string partition = "aws";
  std::string service;
  std::string region;
  std::string account_id;
  std::vector<std::string> resource_path;

  std::string render() const;

  // Throws ParseError on anything render() could not have produced.
  static Arn parse(std::string_view text);

  // Last path segment ("Admin" for role/Admin, the bucket name for S3).
  const std::string& resource_name() const { return resource_path.back(); }
  // First path segment ("user", "role", "instance", ...), or the bucket name.
  const std::string& resource_type() const { return resource_path.front(); }

  friend auto operator<=>(const Arn&, const Arn&) = default;
  friend bool operator==(const Arn&, const Arn&) = default;

  static Arn iam_user(const std::string& account, const std::string& name);
  static Arn iam_role(const std::string& account, const std::string& name);
  static Arn assumed_role(const std::string& account, const std::string& role,
                          const std::string& session);
  static Arn bucket(const std::string& account, const std::string& name);
  static Arn instance(const std::string& region, const std::string& account,
                      const std::string& id);
  static Arn security_group(const std::string& region, const std::string& account,
                            const std::string& id);
};

bool is_account_id(std::string_view s);

}  // namespace irbench
