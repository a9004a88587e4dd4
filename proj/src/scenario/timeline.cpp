// SPDX-License-Identifier: Apache-2.0
#include "irbench/scenario/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "irbench/core/errors.hpp"

namespace irbench::scenario {

std::vector<std::size_t> start_order(const std::vector<AttackStep>& steps) {
  std::vector<std::size_t> order(steps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return steps[a].offset < steps[b].offset;
  });
  return order;
}

std::vector<AttackStep> compress_timeline(const std::vector<AttackStep>& steps, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ValidationError("factor", "compression factor must be a positive number");
  }
  std::vector<AttackStep> out = steps;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < steps.size(); ++i) index[steps[i].step_id] = i;

  const auto scale = [&](DurationMs d) { return static_cast<DurationMs>(std::llround(static_cast<double>(d) * factor)); };

  bool first = true;
  DurationMs prev_start = 0;
  std::size_t prev_index = 0;
  for (const std::size_t i : start_order(steps)) {
    AttackStep& s = out[i];
    s.interval = scale(steps[i].interval);
    DurationMs start = scale(steps[i].offset);
    for (const auto& dep : s.depends_on) {
      const auto it = index.find(dep);
      if (it != index.end()) start = std::max(start, out[it->second].last_offset() + 1);
    }
    if (!first) {
      // Ties are broken by declaration index, so a step declared before its
      // predecessor in start order needs a strictly later time.
      start = std::max(start, prev_index > i ? prev_start + 1 : prev_start);
    }
    s.offset = start;
    prev_start = start;
    prev_index = i;
    first = false;
  }
  return out;
}

std::vector<Occurrence> schedule(const std::vector<AttackStep>& steps) {
  std::vector<Occurrence> occ;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (int r = 1; r <= steps[i].repeat; ++r) {
      occ.push_back({i, r, steps[i].offset + static_cast<DurationMs>(r - 1) * steps[i].interval});
    }
  }
  std::sort(occ.begin(), occ.end(), [](const Occurrence& a, const Occurrence& b) {
    if (a.offset != b.offset) return a.offset < b.offset;
    if (a.step_index != b.step_index) return a.step_index < b.step_index;
    return a.repetition < b.repetition;
  });
  return occ;
}

}  // namespace irbench::scenario
