// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "irbench/core/errors.hpp"
#include "irbench/core/rng.hpp"
#include "irbench/scenario/spec.hpp"

namespace irbench::variation {

enum class Transform { rename_resources, shift_region, shift_timeline, swap_technique };

std::string_view to_string(Transform t);
Transform transform_from_string(std::string_view text);

// A transform cannot be applied to the given spec. field() is
// "transforms.<name>".
class TransformError : public ValidationError {
 public:
  TransformError(Transform t, const std::string& what)
      : ValidationError("transforms." + std::string(to_string(t)), what) {}
};

struct VariationPlan {
  scenario::ScenarioSpec seed_case;
  std::vector<Transform> transforms;
  int count = 1;
  std::uint64_t rng_seed = 0;
};

// Alias table produced by rename_resources, original -> replacement.
using RenameMap = std::map<std::string, std::string>;

// Resource names a rename must replace: users (declared and created by
// steps), roles, buckets, security group ids and names, instance ids and
// names.
std::vector<std::string> resource_names(const scenario::ScenarioSpec& spec);

scenario::ScenarioSpec rename_resources(const scenario::ScenarioSpec& spec, Rng& rng, RenameMap* map = nullptr);
scenario::ScenarioSpec shift_region(const scenario::ScenarioSpec& spec, const std::string& region);
scenario::ScenarioSpec shift_timeline(const scenario::ScenarioSpec& spec, DurationMs delta);

struct TechniqueSwap {
  cloud::ActionType from;
  cloud::ActionType to;
  std::vector<Category> categories;
};

// Interchangeable actions. Both directions are listed; a swap keeps every
// finding template the rulebook derives from the step.
const std::vector<TechniqueSwap>& technique_swaps();

// Replaces every non-triggering step of one randomly chosen swappable action
// type with its alternative. Throws TransformError when no step qualifies.
scenario::ScenarioSpec swap_technique(const scenario::ScenarioSpec& spec, Rng& rng);

// Applies one transform with parameters drawn from rng.
scenario::ScenarioSpec apply_transform(const scenario::ScenarioSpec& spec, Transform t, Rng& rng);

// `count` variations; variation i draws from its own stream so the list is
// deterministic in rng_seed. Throws ValidationError for count < 1 or an empty
// transform list and TransformError for an inapplicable transform.
std::vector<scenario::ScenarioSpec> generate_variations(const VariationPlan& plan);

}  // namespace irbench::variation
