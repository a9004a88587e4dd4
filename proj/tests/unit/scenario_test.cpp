// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "irbench/eval/evidence.hpp"
#include "irbench/scenario/bundle.hpp"
#include "irbench/scenario/seeds.hpp"
#include "irbench/scenario/timeline.hpp"
#include "irbench/text/rouge.hpp"
#include "oracles.hpp"

using namespace irbench;
using namespace irbench::scenario;

namespace {

const ScenarioSpec& seed(const std::string& id) {
  for (const auto& s : seed_library()) {
    if (s.scenario_id == id) return s;
  }
  throw std::runtime_error("no seed " + id);
}

std::multiset<std::string> rule_ids(const GroundTruth& g) {
  std::multiset<std::string> out;
  for (const auto& f : g.findings) out.insert(f.rule_id);
  return out;
}

}  // namespace

TEST(Timeline, CompressionKeepsCausalAndStartOrder) {
  Rng rng(50);
  for (int dag = 0; dag < 50; ++dag) {
    const auto steps = oracle::random_dag(rng, 2 + rng.below(10));
    const double factor = 0.05 + static_cast<double>(rng.below(200)) / 100.0;
    const auto out = compress_timeline(steps, factor);
    ASSERT_EQ(out.size(), steps.size());
    EXPECT_EQ(start_order(out), start_order(steps));
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_GE(out[i].offset, 0);
      EXPECT_EQ(out[i].step_id, steps[i].step_id);
      for (const auto& dep : out[i].depends_on) {
        const auto* d = &*std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.step_id == dep; });
        EXPECT_GT(out[i].offset, d->last_offset()) << "dag " << dag << " step " << out[i].step_id;
      }
    }
  }
}

TEST(Timeline, FactorMustBePositive) {
  Rng rng(1);
  const auto steps = oracle::random_dag(rng, 3);
  EXPECT_THROW(compress_timeline(steps, 0.0), ValidationError);
  EXPECT_THROW(compress_timeline(steps, -1.0), ValidationError);
}

TEST(Timeline, ScheduleIsOrderedAndComplete) {
  Rng rng(9);
  const auto steps = oracle::random_dag(rng, 8);
  const auto occ = schedule(steps);
  std::size_t expected = 0;
  for (const auto& s : steps) expected += static_cast<std::size_t>(s.repeat);
  ASSERT_EQ(occ.size(), expected);
  for (std::size_t i = 1; i < occ.size(); ++i) EXPECT_LE(occ[i - 1].offset, occ[i].offset);
}

TEST(Spec, ValidateNamesTheProblem) {
  ScenarioSpec s = seed("bf-console-stuffing");
  EXPECT_NO_THROW(validate(s));
  ScenarioSpec dup = s;
  dup.steps[1].step_id = dup.steps[0].step_id;
  EXPECT_THROW(validate(dup), ValidationError);
  ScenarioSpec rep = s;
  rep.steps[0].repeat = 0;
  EXPECT_THROW(validate(rep), ValidationError);
  ScenarioSpec none = s;
  for (auto& st : none.steps) st.triggers_alert = false;
  EXPECT_THROW(validate(none), ValidationError);
  ScenarioSpec empty = s;
  empty.steps.clear();
  EXPECT_THROW(validate(empty), ValidationError);
}

TEST(Spec, JsonRoundTrip) {
  for (const auto& s : seed_library()) EXPECT_EQ(scenario_from_json(scenario_to_json(s)), s) << s.scenario_id;
}

TEST(Execute, DeterministicAndSeedSensitive) {
  const auto& s = seed("ua-role-chain-exfil");
  const auto a = execute_scenario(s, 17, "c1");
  const auto b = execute_scenario(s, 17, "c1");
  EXPECT_EQ(serialize_bundle(a.bundle), serialize_bundle(b.bundle));
  EXPECT_NE(serialize_bundle(execute_scenario(s, 18, "c1").bundle), serialize_bundle(a.bundle));
}

TEST(Execute, SeedLibraryProducesConsistentBundles) {
  for (const auto& s : seed_library()) {
    const auto x = execute_scenario(s, 3, s.scenario_id);
    const auto& b = x.bundle;
    EXPECT_TRUE(check_bundle(b).empty()) << s.scenario_id;
    EXPECT_EQ(b.ground_truth.verdict, s.intended_verdict);
    EXPECT_GE(b.ground_truth.novel_count(), 3u) << s.scenario_id;
    EXPECT_FALSE(b.alert.triggering_event_ids.empty());
    for (const auto* f : b.ground_truth.novel_findings()) {
      for (const auto& ev : f->evidence) EXPECT_TRUE(eval::resolves(ev, b)) << s.scenario_id << " " << ev.value;
      // Repeating the alert must never earn credit for a novel finding.
      EXPECT_LE(text::rouge_l(f->statement, b.alert.description), 0.42) << f->statement;
      EXPECT_TRUE(classify_novel(*f, b.alert));
    }
  }
}

TEST(Rulebook, ExpectedRulesFire) {
  const auto rules = [](const char* id) { return rule_ids(execute_scenario(seed(id), 1, id).bundle.ground_truth); };
  EXPECT_TRUE(rules("bf-console-stuffing").count("auth.failed_then_success"));
  EXPECT_TRUE(rules("bf-console-stuffing").count("privesc.admin_policy"));
  EXPECT_TRUE(rules("ua-role-chain-exfil").count("lateral.role_chain"));
  EXPECT_TRUE(rules("ua-role-chain-exfil").count("exfiltration.bulk_read"));
  EXPECT_TRUE(rules("mc-public-bucket").count("exposure.anonymous_reads"));
  EXPECT_TRUE(rules("mfe-ssm-reverse-shell").count("execution.reverse_shell"));
}

TEST(Bundle, WriteReadRoundTripWithoutGroundTruth) {
  const auto b = execute_scenario(seed("mc-public-bucket"), 5, "mc-x").bundle;
  const auto dir = std::filesystem::temp_directory_path() / "irbench-bundle-test";
  std::filesystem::remove_all(dir);
  write_bundle(b, dir);
  EXPECT_EQ(read_bundle(dir), b);
  std::filesystem::remove(dir / kGroundTruthFile);
  const auto blind = read_bundle(dir, false);
  EXPECT_EQ(blind.log, b.log);
  EXPECT_TRUE(blind.ground_truth.findings.empty());
  EXPECT_THROW(read_bundle(dir, true), Error);
  std::filesystem::remove_all(dir);
}

TEST(Bundle, ParseOfSerializeIsIdentity) {
  for (const auto& s : seed_library()) {
    const auto b = execute_scenario(s, 8, s.scenario_id).bundle;
    EXPECT_EQ(parse_bundle(serialize_bundle(b)), b);
  }
}
