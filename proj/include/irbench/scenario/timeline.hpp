// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "irbench/scenario/spec.hpp"

namespace irbench::scenario {

// Scales offsets and intervals by `factor` (rounded to the millisecond),
// then pushes steps later only as far as needed so that every dependent
// starts strictly after its dependency's last repetition and steps keep
// their original start order. Steps must satisfy validate()'s ordering
// rules. Throws ValidationError when factor <= 0.
std::vector<AttackStep> compress_timeline(const std::vector<AttackStep>& steps, double factor);

// One scheduled repetition of a step.
struct Occurrence {
  std::size_t step_index = 0;
  int repetition = 1;  // 1-based
  DurationMs offset = 0;
};

// All repetitions ordered by (offset, declaration index, repetition).
std::vector<Occurrence> schedule(const std::vector<AttackStep>& steps);

// Step indices ordered by first occurrence, i.e. by (offset, index).
std::vector<std::size_t> start_order(const std::vector<AttackStep>& steps);

}  // namespace irbench::scenario
