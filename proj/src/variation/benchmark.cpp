// SPDX-License-Identifier: Apache-2.0
#include "irbench/variation/benchmark.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "irbench/scenario/timeline.hpp"
#include "irbench/variation/archetypes.hpp"
#include "irbench/variation/transforms.hpp"

namespace irbench::variation {

using scenario::ScenarioSpec;

int DistributionConfig::total() const {
  int n = 0;
  for (const auto& [c, k] : counts) n += k.tp + k.fp;
  return n;
}

DistributionConfig default_config() {
  DistributionConfig c;
  c.counts = {{Category::brute_force, {135, 59}},
              {Category::unauthorized_access, {186, 112}},
              {Category::misconfiguration, {100, 75}},
              {Category::malicious_file_execution, {54, 73}}};
  return c;
}

ojson config_to_json(const DistributionConfig& c) {
  ojson cats = ojson::object();
  for (const auto& [cat, k] : c.counts) cats[std::string(to_string(cat))] = {{"tp", k.tp}, {"fp", k.fp}};
  return {{"categories", cats},
          {"compression_factor", c.compression_factor},
          {"conversion_percent", c.conversion_percent},
          {"swap_percent", c.swap_percent},
          {"max_attempts", c.max_attempts},
          {"min_tp_findings", c.validation.min_tp_findings},
          {"min_fp_benign", c.validation.min_fp_benign}};
}

namespace {

int count_field(const ojson& j, const std::string& key, const std::string& field, int fallback, int min) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(field, "must be an integer");
  const auto n = v.get<std::int64_t>();
  if (n < min || n > 1'000'000) throw ValidationError(field, "out of range: " + std::to_string(n));
  return static_cast<int>(n);
}

}  // namespace

DistributionConfig config_from_json(const ojson& j) {
  if (!j.is_object()) throw ValidationError("config", "expected an object");
  DistributionConfig c;
  if (j.contains("categories")) {
    const auto& cats = j.at("categories");
    if (!cats.is_object()) throw ValidationError("categories", "expected an object");
    for (const auto& [name, v] : cats.items()) {
      Category cat;
      try {
        cat = category_from_string(name);
      } catch (const ValidationError&) {
        throw ValidationError("categories." + name, "unknown category");
      }
      if (!v.is_object()) throw ValidationError("categories." + name, "expected {\"tp\":n,\"fp\":n}");
      CategoryCounts k;
      k.tp = count_field(v, "tp", "categories." + name + ".tp", 0, 0);
      k.fp = count_field(v, "fp", "categories." + name + ".fp", 0, 0);
      c.counts[cat] = k;
    }
  }
  if (j.contains("compression_factor")) {
    const auto& f = j.at("compression_factor");
    if (!f.is_number() || !std::isfinite(f.get<double>()) || f.get<double>() <= 0) {
      throw ValidationError("compression_factor", "must be a positive number");
    }
    c.compression_factor = f.get<double>();
  }
  c.conversion_percent = count_field(j, "conversion_percent", "conversion_percent", c.conversion_percent, 0);
  c.swap_percent = count_field(j, "swap_percent", "swap_percent", c.swap_percent, 0);
  if (c.conversion_percent > 100) throw ValidationError("conversion_percent", "must be <= 100");
  if (c.swap_percent > 100) throw ValidationError("swap_percent", "must be <= 100");
  c.max_attempts = count_field(j, "max_attempts", "max_attempts", c.max_attempts, 1);
  c.validation.min_tp_findings = count_field(j, "min_tp_findings", "min_tp_findings", c.validation.min_tp_findings, 0);
  c.validation.min_fp_benign = count_field(j, "min_fp_benign", "min_fp_benign", c.validation.min_fp_benign, 0);
  return c;
}

std::string_view category_prefix(Category c) {
  switch (c) {
    case Category::brute_force: return "bf";
    case Category::unauthorized_access: return "ua";
    case Category::misconfiguration: return "mc";
    case Category::malicious_file_execution: return "mfe";
  }
  return "?";
}

namespace {

struct Job {
  std::string case_id;
  Category category;
  Verdict verdict;
};

struct Outcome {
  scenario::CaseBundle bundle;
  std::vector<RejectedAttempt> rejected;
};

ScenarioSpec vary(ScenarioSpec s, Rng& rng, const DistributionConfig& config, bool allow_swap) {
  for (auto t : {Transform::rename_resources, Transform::shift_region, Transform::shift_timeline}) {
    s = apply_transform(s, t, rng);
    s.lineage.emplace_back(to_string(t));
  }
  if (allow_swap && rng.chance(static_cast<std::uint32_t>(config.swap_percent), 100)) {
    try {
      s = swap_technique(s, rng);
      s.lineage.emplace_back(to_string(Transform::swap_technique));
    } catch (const TransformError&) {
      // No alternative registered for this spec; keep the original technique.
    }
  }
  if (config.compression_factor != 1.0) s.steps = scenario::compress_timeline(s.steps, config.compression_factor);
  return s;
}

Outcome build_case(const Job& job, const DistributionConfig& config, const std::vector<const ScenarioSpec*>& tp_seeds,
                   const std::vector<const ScenarioSpec*>& fp_seeds, std::uint64_t rng_seed) {
  const std::uint64_t case_seed = mix64(rng_seed ^ stable_hash(job.case_id));
  const auto archetypes = archetypes_for(job.category);
  Outcome out;
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    Rng rng(mix64(case_seed + static_cast<std::uint64_t>(attempt)));
    ScenarioSpec spec;
    if (job.verdict == Verdict::TP) {
      if (rng.chance(static_cast<std::uint32_t>(config.conversion_percent), 100)) {
        const auto& a = archetypes[rng.below(archetypes.size())];
        const auto fp = generate_false_positive(a, rng.next());
        spec = vary(convert_fp_to_tp(fp, rng.next()), rng, config, false);
      } else {
        spec = vary(*tp_seeds[rng.below(tp_seeds.size())], rng, config, true);
      }
    } else {
      const std::size_t pick = rng.below(archetypes.size() + fp_seeds.size());
      const ScenarioSpec base = pick < archetypes.size() ? generate_false_positive(archetypes[pick], rng.next())
                                                         : *fp_seeds[pick - archetypes.size()];
      spec = vary(base, rng, config, false);
    }
    ValidationOptions opts = config.validation;
    opts.dry_run_seed = case_seed;
    auto result = validate_variation(spec, opts, job.case_id);
    if (result.accepted()) {
      out.bundle = std::move(result.execution->bundle);
      return out;
    }
    for (auto& r : result.rejections) out.rejected.push_back({job.case_id, attempt, spec.lineage, std::move(r)});
  }
  throw scenario::GenerationError("cases." + job.case_id,
                                  "no acceptable variation in " + std::to_string(config.max_attempts) + " attempts");
}

}  // namespace

Benchmark build_benchmark(const DistributionConfig& config, const std::vector<ScenarioSpec>& seeds,
                          std::uint64_t rng_seed, int jobs) {
  std::vector<Job> queue;
  std::map<Category, std::vector<const ScenarioSpec*>> tp_seeds, fp_seeds;
  for (const auto& s : seeds) (s.intended_verdict == Verdict::TP ? tp_seeds : fp_seeds)[s.category].push_back(&s);

  for (const auto& [cat, k] : config.counts) {
    if (k.tp < 0 || k.fp < 0) throw ValidationError("categories." + std::string(to_string(cat)), "negative count");
    if (k.tp > 0 && tp_seeds[cat].empty()) {
      throw ValidationError("categories." + std::string(to_string(cat)), "no TP seed scenarios for this category");
    }
    for (Verdict v : {Verdict::TP, Verdict::FP}) {
      const int n = v == Verdict::TP ? k.tp : k.fp;
      for (int i = 1; i <= n; ++i) {
        char num[16];
        std::snprintf(num, sizeof num, "%04d", i);
        queue.push_back({std::string(category_prefix(cat)) + "-" + (v == Verdict::TP ? "tp" : "fp") + "-" + num, cat, v});
      }
    }
  }

  std::vector<Outcome> results(queue.size());
  std::vector<std::exception_ptr> errors(queue.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < queue.size(); i = next++) {
      try {
        results[i] = build_case(queue[i], config, tp_seeds[queue[i].category], fp_seeds[queue[i].category], rng_seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(queue.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Benchmark out;
  for (auto& r : results) {
    out.cases.push_back(std::move(r.bundle));
    for (auto& x : r.rejected) out.rejected.push_back(std::move(x));
  }
  return out;
}

std::vector<ScenarioSpec> read_spec_stream(std::istream& in) {
  std::vector<ScenarioSpec> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const ojson::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), n);
    }
    try {
      out.push_back(scenario::scenario_from_json(j));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), n);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), n);
    }
  }
  return out;
}

}  // namespace irbench::variation
