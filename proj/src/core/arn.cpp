// SPDX-License-Identifier: Apache-2.0
#include "irbench/core/arn.hpp"

#include <algorithm>

#include "irbench/core/errors.hpp"

namespace irbench {
namespace {

bool valid_token(std::string_view s, bool allow_empty) {
  if (s.empty()) return allow_empty;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == ':' || c == '/' || c == ' ' || c == '\t' || c == '\n';
  });
}

std::vector<std::string_view> split(std::string_view s, char sep, std::size_t max_parts) {
  std::vector<std::string_view> parts;
  while (parts.size() + 1 < max_parts) {
    const auto pos = s.find(sep);
    if (pos == std::string_view::npos) break;
    parts.push_back(s.substr(0, pos));
    s.remove_prefix(pos + 1);
  }
  parts.push_back(s);
  return parts;
}

}  // namespace

bool is_account_id(std::string_view s) {
  return s.size() == 12 &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string Arn::render() const {
  std::string out = "arn:" + partition + ":" + service + ":" + region + ":" + account_id + ":";
  for (std::size_t i = 0; i < resource_path.size(); ++i) {
    if (i) out += '/';
    out += resource_path[i];
  }
  return out;
}

Arn Arn::parse(std::string_view text) {
  const auto fail = [&](const char* why) {
    return ParseError("malformed ARN '" + std::string(text) + "': " + why);
  };
  const auto parts = split(text, ':', 6);
  if (parts.size() != 6 || parts[0] != "arn") throw fail("expected 6 ':'-separated fields");
  Arn arn;
  arn.partition = parts[1];
  arn.service = parts[2];
  arn.region = parts[3];
  arn.account_id = parts[4];
  if (!valid_token(arn.partition, false)) throw fail("bad partition");
  if (!valid_token(arn.service, false)) throw fail("bad service");
  if (!valid_token(arn.region, true)) throw fail("bad region");
  if (!is_account_id(arn.account_id)) throw fail("account id must be 12 digits");
  for (auto seg : split(parts[5], '/', std::string_view::npos)) {
    if (!valid_token(seg, false)) throw fail("bad resource path");
    arn.resource_path.emplace_back(seg);
  }
  return arn;
}

Arn Arn::iam_user(const std::string& account, const std::string& name) {
  return {"aws", "iam", "", account, {"user", name}};
}
Arn Arn::iam_role(const std::string& account, const std::string& name) {
  return {"aws", "iam", "", account, {"role", name}};
}
Arn Arn::assumed_role(const std::string& account, const std::string& role,
                      const std::string& session) {
  return {"aws", "sts", "", account, {"assumed-role", role, session}};
}
Arn Arn::bucket(const std::string& account, const std::string& name) {
  return {"aws", "s3", "", account, {name}};
}
Arn Arn::instance(const std::string& region, const std::string& account,
                  const std::string& id) {
  return {"aws", "ec2", region, account, {"instance", id}};
}
Arn Arn::security_group(const std::string& region, const std::string& account,
                        const std::string& id) {
  return {"aws", "ec2", region, account, {"security-group", id}};
}

}  // namespace irbench
