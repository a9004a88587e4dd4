// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irbench/cloud/provision.hpp"
#include "irbench/core/json.hpp"

namespace irbench::cloud {

ojson policy_to_json(const PolicyDoc& p);
// IAM-style document ("Version", "Statement" with Effect/Principal/Action/
// Resource). Principal is omitted from statements that have none.
ojson aws_policy_document(const PolicyDoc& p);
PolicyDoc policy_from_json(const ojson& j);

// Snapshot document. Map-backed collections serialize in key order, so equal
// environments produce identical bytes.
ojson environment_to_json(const Environment& env);
Environment environment_from_json(const ojson& j);

ojson env_spec_to_json(const EnvironmentSpec& spec);
// Missing optional fields take their defaults; throws ParseError or
// ValidationError on bad content.
EnvironmentSpec env_spec_from_json(const ojson& j);

}  // namespace irbench::cloud
