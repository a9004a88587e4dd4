// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "irbench/scenario/spec.hpp"

namespace irbench::variation {

enum class FpKind { admin_activity, intentionally_public, cicd_pipeline, partner_cross_account };

std::string_view to_string(FpKind k);
FpKind fp_kind_from_string(std::string_view text);

// parameters:
//   category   admin_activity: any category (default brute_force)
//              cicd_pipeline: unauthorized_access or malicious_file_execution
//                             (default malicious_file_execution)
struct FpArchetype {
  FpKind kind = FpKind::admin_activity;
  std::map<std::string, std::string> parameters;
};

// Archetypes that can stand in for an FP case of the category.
std::vector<FpArchetype> archetypes_for(Category c);

// Benign look-alike whose alert fires but whose investigation turns up a
// documented explanation. Every step is benign, so the verdict is FP.
// Throws ValidationError("parameters.category") for an unsupported category.
scenario::ScenarioSpec generate_false_positive(const FpArchetype& archetype, std::uint64_t seed);

// Replays the category's standard attack sequence inside an FP spec's
// environment: attacker-side resources are added under fresh names and the
// malicious steps run after the benign activity. The alert is unchanged and
// the intended verdict becomes TP.
scenario::ScenarioSpec convert_fp_to_tp(const scenario::ScenarioSpec& fp, std::uint64_t seed);

}  // namespace irbench::variation
