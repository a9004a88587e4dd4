// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "irbench/scenario/spec.hpp"

namespace irbench::scenario {

// Hand-written true-positive seed incidents, two per category, modelled on
// the attack patterns of each category.
const std::vector<ScenarioSpec>& seed_library();

std::vector<ScenarioSpec> seeds_for(Category c);

}  // namespace irbench::scenario
