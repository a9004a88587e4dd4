// SPDX-License-Identifier: Apache-2.0
#include "irbench/telemetry/event.hpp"

#include "irbench/core/errors.hpp"

namespace irbench::telemetry {

std::string_view to_string(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::iam_user: return "iam_user";
    case IdentityKind::assumed_role: return "assumed_role";
    case IdentityKind::anonymous: return "anonymous";
    case IdentityKind::service: return "service";
  }
  return "anonymous";
}

IdentityKind identity_kind_from_string(std::string_view text) {
  if (text == "iam_user") return IdentityKind::iam_user;
  if (text == "assumed_role") return IdentityKind::assumed_role;
  if (text == "anonymous") return IdentityKind::anonymous;
  if (text == "service") return IdentityKind::service;
  throw ParseError("unknown identity kind '" + std::string(text) + "'");
}

namespace {

bool names_resource(std::string_view key, const std::string& value, const Arn& r) {
  const auto& path = r.resource_path;
  if (key == "bucketName") return r.service == "s3" && path.size() == 1 && value == path[0];
  if (key == "userName") return r.service == "iam" && path.size() == 2 && path[0] == "user" && value == path[1];
  if (key == "roleName") return r.service == "iam" && path.size() == 2 && path[0] == "role" && value == path[1];
  if (key == "instanceId") return r.service == "ec2" && path.size() == 2 && path[0] == "instance" && value == path[1];
  if (key == "groupId") return r.service == "ec2" && path.size() == 2 && path[0] == "security-group" && value == path[1];
  return false;
}

bool scan(const FieldMap& fields, const Arn& r, const std::string& rendered) {
  for (const auto& [key, value] : fields) {
    if (value == rendered) return true;
    for (auto k : kResourceKeys) {
      if (key == k && names_resource(k, value, r)) return true;
    }
  }
  return false;
}

}  // namespace

bool touches_resource(const CloudEvent& event, const Arn& resource) {
  const std::string rendered = resource.render();
  return scan(event.request_parameters, resource, rendered) ||
         scan(event.response_elements, resource, rendered);
}

}  // namespace irbench::telemetry
