// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "irbench/core/json.hpp"
#include "irbench/scenario/execute.hpp"
#include "irbench/variation/validate.hpp"

namespace irbench::variation {

struct CategoryCounts {
  int tp = 0;
  int fp = 0;

  friend bool operator==(const CategoryCounts&, const CategoryCounts&) = default;
};

struct DistributionConfig {
  std::map<Category, CategoryCounts> counts;
  // Applied to every generated timeline.
  double compression_factor = 0.5;
  // Share of TP cases built by replaying an attack inside an FP archetype.
  int conversion_percent = 10;
  // Share of variations that also get swap_technique.
  int swap_percent = 50;
  int max_attempts = 20;
  ValidationOptions validation;

  int total() const;
};

// 475 TP / 319 FP over the four categories.
DistributionConfig default_config();

ojson config_to_json(const DistributionConfig& c);
// Throws ValidationError naming the field (unknown category, negative count,
// non-positive factor).
DistributionConfig config_from_json(const ojson& j);

// Short case-id prefix: bf, ua, mc, mfe.
std::string_view category_prefix(Category c);

struct RejectedAttempt {
  std::string case_id;
  int attempt = 0;
  std::vector<std::string> lineage;
  Rejection rejection;
};

struct Benchmark {
  std::vector<scenario::CaseBundle> cases;  // ordered by category, then TP before FP, then index
  std::vector<RejectedAttempt> rejected;
};

// Pure function of (config, seeds, rng_seed); `jobs` only changes speed.
// TP cases vary the category's TP seeds, FP cases come from the archetypes
// plus any FP seeds. Throws ValidationError("categories.<name>") when TP
// cases are requested for a category with no TP seed, and GenerationError
// when a case exhausts max_attempts.
Benchmark build_benchmark(const DistributionConfig& config, const std::vector<scenario::ScenarioSpec>& seeds,
                          std::uint64_t rng_seed, int jobs = 1);

// Specs from an external generator, one JSON document per line. Blank lines
// are skipped; a malformed line raises ParseError with its line number.
std::vector<scenario::ScenarioSpec> read_spec_stream(std::istream& in);

}  // namespace irbench::variation
