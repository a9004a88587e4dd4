// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "irbench/eval/evidence.hpp"
#include "irbench/eval/metrics.hpp"
#include "irbench/eval/summary.hpp"
#include "irbench/harness/agents.hpp"
#include "irbench/harness/session.hpp"
#include "irbench/scenario/execute.hpp"
#include "irbench/scenario/seeds.hpp"
#include "oracles.hpp"

using namespace irbench;
using namespace irbench::eval;
using harness::Claim;
using harness::InvestigationReport;
using scenario::EvidenceArtifact;
using scenario::EvidenceKind;
using scenario::Finding;
using scenario::GroundTruth;

namespace {

GroundTruth truth_of(const std::vector<std::string>& statements, std::size_t novel_from = 0) {
  GroundTruth t;
  t.verdict = Verdict::TP;
  for (std::size_t i = 0; i < statements.size(); ++i) {
    Finding f;
    f.finding_id = "f-" + std::to_string(i);
    f.rule_id = "r";
    f.statement = statements[i];
    f.novel = i >= novel_from;
    t.findings.push_back(f);
  }
  return t;
}

std::vector<std::string> tokens(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

const std::vector<scenario::CaseBundle>& bundles() {
  static const std::vector<scenario::CaseBundle> all = [] {
    std::vector<scenario::CaseBundle> out;
    int i = 0;
    for (const auto& s : scenario::seed_library()) {
      out.push_back(scenario::execute_scenario(s, 5, "case-" + std::to_string(i++)).bundle);
    }
    return out;
  }();
  return all;
}

harness::SessionOutcome run(harness::Agent agent, const scenario::CaseBundle& b) {
  harness::InProcessTransport t(std::move(agent));
  return harness::run_session(t, {b.manifest.case_id, b.alert, {b.environment, b.log}}, {});
}

CaseScore make_score(std::string id, Category c, Verdict actual, Verdict predicted, std::size_t novel_found = 0,
                     std::size_t novel_total = 0) {
  CaseScore s;
  s.case_id = std::move(id);
  s.category = c;
  s.actual = actual;
  s.predicted = predicted;
  s.m2.novel_found = novel_found;
  s.m2.novel_total = novel_total;
  if (novel_total) s.m2.novel_recall = static_cast<double>(novel_found) / static_cast<double>(novel_total);
  s.m3 = 1.0;
  s.evidence.outcome = actual == Verdict::TP && predicted == Verdict::TP ? EvidenceOutcome::upheld
                                                                          : EvidenceOutcome::not_applicable;
  return s;
}

}  // namespace

TEST(Match, ThresholdIsStrict) {
  const auto ref = tokens("w", 50);
  auto cand = std::vector<std::string>(ref.begin(), ref.begin() + 21);
  for (const auto& t : tokens("x", 29)) cand.push_back(t);
  const GroundTruth gt = truth_of({oracle::join(ref)});
  const auto at = match_findings({oracle::join(cand)}, gt);
  EXPECT_NEAR(at.findings[0].best_score, 0.42, 1e-12);
  EXPECT_FALSE(at.findings[0].matched);
  cand[21] = ref[21];
  const auto above = match_findings({oracle::join(cand)}, gt);
  EXPECT_NEAR(above.findings[0].best_score, 0.44, 1e-12);
  EXPECT_TRUE(above.findings[0].matched);
}

TEST(Match, BestClaimPerFindingAndBadTau) {
  const GroundTruth gt = truth_of({"attacker created access key for backdoor user", "bucket policy made public"});
  const auto r = match_findings({"nothing relevant here", "the bucket policy was made public", "attacker created an access key"}, gt);
  ASSERT_EQ(r.findings.size(), 2u);
  EXPECT_EQ(r.findings[0].best_claim, 2u);
  EXPECT_EQ(r.findings[1].best_claim, 1u);
  EXPECT_TRUE(r.findings[1].matched);
  const auto none = match_findings({}, gt);
  EXPECT_FALSE(none.findings[0].best_claim.has_value());
  EXPECT_FALSE(none.findings[0].matched);
  EXPECT_THROW(match_findings({}, gt, 0.0), ValidationError);
  EXPECT_THROW(match_findings({}, gt, 1.0), ValidationError);
}

TEST(M1, RatesFromCounts) {
  std::vector<LabeledVerdict> v;
  for (int i = 0; i < 475; ++i) v.push_back({i < 461 ? Verdict::TP : Verdict::FP, Verdict::TP});
  for (int i = 0; i < 319; ++i) v.push_back({i < 234 ? Verdict::FP : Verdict::TP, Verdict::FP});
  const M1 m = score_m1(v);
  EXPECT_EQ(m.tp.hits, 461u);
  EXPECT_EQ(m.tp.total, 475u);
  EXPECT_NEAR(*m.tp.value(), 0.9705, 5e-5);
  EXPECT_NEAR(*m.fp.value(), 0.7335, 5e-5);
  EXPECT_FALSE(score_m1({}).tp.value().has_value());
}

TEST(FBeta, KnownValuesAndEdges) {
  EXPECT_NEAR(f_beta(0.971, 0.734, 3), 0.9406, 5e-4);
  EXPECT_NEAR(f_beta(0.940, 0.827, 3), 0.9273, 5e-4);
  EXPECT_NEAR(f_beta(0.5, 0.5, 1), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(f_beta(1, 1, 3), 1.0);
  EXPECT_DOUBLE_EQ(f_beta(0, 0, 3), 0.0);
  EXPECT_FALSE(f_beta(std::optional<double>{}, std::optional<double>{0.5}, 3).has_value());
}

TEST(FBeta, MonotoneInBothRates) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.between(0, 1000) / 1000.0, b = rng.between(0, 1000) / 1000.0;
    const double d = rng.between(1, 100) / 1000.0;
    const double beta = rng.between(1, 5);
    EXPECT_LE(f_beta(a, b, beta), f_beta(std::min(1.0, a + d), b, beta) + 1e-12);
    EXPECT_LE(f_beta(a, b, beta), f_beta(a, std::min(1.0, b + d), beta) + 1e-12);
    const double f = f_beta(a, b, beta);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
}

TEST(M2, NovelRecall) {
  std::vector<std::string> statements;
  statements.push_back("the alert fired for the bucket");
  for (int i = 0; i < 12; ++i) statements.push_back(oracle::join(tokens("n" + std::to_string(i) + "t", 8)));
  const GroundTruth gt = truth_of(statements, 1);
  std::vector<std::string> claims = {"the alert fired for the bucket"};
  for (int i = 0; i < 5; ++i) claims.push_back(statements[1 + i]);
  const M2 m = score_m2(claims, gt);
  EXPECT_EQ(m.novel_total, 12u);
  EXPECT_EQ(m.novel_found, 5u);
  EXPECT_EQ(m.matched, 6u);
  EXPECT_NEAR(*m.novel_recall, 5.0 / 12.0, 1e-12);
  EXPECT_NEAR(*m.recall, 6.0 / 13.0, 1e-12);
  const M2 empty = score_m2({}, truth_of({"only alert"}, 1));
  EXPECT_FALSE(empty.novel_recall.has_value());
}

TEST(M2, ThresholdCurve) {
  const std::vector<std::size_t> counts = {7, 5, 2};
  EXPECT_NEAR(*m2_threshold(counts, 5), 2.0 / 3.0, 1e-12);
  EXPECT_FALSE(m2_threshold({}, 3).has_value());
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::size_t> c(rng.between(1, 30));
    for (auto& x : c) x = rng.between(0, 12);
    for (std::size_t n = 0; n < 14; ++n) EXPECT_GE(*m2_threshold(c, n), *m2_threshold(c, n + 1));
    EXPECT_DOUBLE_EQ(*m2_threshold(c, 0), 1.0);
  }
}

TEST(M3, ToolCoverage) {
  ExpectedTools table = {{Category::brute_force, {"lookup_events", "list_users", "get_user", "get_cost_and_usage"}}};
  harness::SessionTranscript t;
  for (const char* tool : {"lookup_events", "list_users", "lookup_events", "get_user", "list_buckets"}) {
    t.entries.push_back({{"c", tool, ojson::object()}, {"c", true, ojson::object(), ""}});
  }
  EXPECT_DOUBLE_EQ(score_m3(t, Category::brute_force, table), 0.75);
  EXPECT_DOUBLE_EQ(score_m3({}, Category::brute_force, table), 0.0);
  EXPECT_THROW(score_m3(t, Category::misconfiguration, table), ValidationError);
}

TEST(M3, ExpectedToolsJson) {
  const ExpectedTools d = default_expected_tools();
  EXPECT_EQ(expected_tools_from_json(expected_tools_to_json(d)), d);
  EXPECT_THROW(expected_tools_from_json(ojson{{"phishing", {"lookup_events"}}}), Error);
  EXPECT_THROW(expected_tools_from_json(ojson{{"brute_force", {"teleport"}}}), Error);
}

TEST(Evidence, Outcomes) {
  const auto& b = bundles()[0];
  ASSERT_EQ(b.ground_truth.verdict, Verdict::TP);
  const auto& triggers = b.alert.triggering_event_ids;
  std::string other;
  for (const auto& e : b.log.events()) {
    if (std::find(triggers.begin(), triggers.end(), e.event_id) == triggers.end()) other = e.event_id;
  }
  ASSERT_FALSE(other.empty());
  const auto report = [&](Verdict v, std::vector<EvidenceArtifact> refs) {
    InvestigationReport r;
    r.case_id = b.manifest.case_id;
    r.verdict = v;
    if (!refs.empty() || v == Verdict::FP) r.claims.push_back({"claim", refs});
    return r;
  };
  const EvidenceArtifact trig{EvidenceKind::event_id, triggers.front()};
  const EvidenceArtifact real{EvidenceKind::event_id, other};
  const EvidenceArtifact bogus{EvidenceKind::event_id, "no-such-event"};
  const EvidenceArtifact late{EvidenceKind::timestamp, "2099-01-01T00:00:00Z"};

  EXPECT_EQ(validate_evidence(report(Verdict::FP, {}), b).outcome, EvidenceOutcome::not_applicable);
  auto v = validate_evidence(report(Verdict::TP, {}), b);
  EXPECT_EQ(v.outcome, EvidenceOutcome::downgraded);
  EXPECT_EQ(v.reason, DowngradeReason::no_evidence);
  v = validate_evidence(report(Verdict::TP, {trig}), b);
  EXPECT_EQ(v.reason, DowngradeReason::alert_only_evidence);
  v = validate_evidence(report(Verdict::TP, {real, bogus}), b);
  EXPECT_EQ(v.reason, DowngradeReason::unresolvable_refs);
  v = validate_evidence(report(Verdict::TP, {real, late}), b);
  EXPECT_EQ(v.reason, DowngradeReason::unresolvable_refs);
  v = validate_evidence(report(Verdict::TP, {trig, real}), b);
  EXPECT_EQ(v.outcome, EvidenceOutcome::upheld);
  EXPECT_FALSE(v.reason.has_value());
  EXPECT_EQ(validate_evidence(report(Verdict::TP, {trig, real}), b, 2).outcome, EvidenceOutcome::downgraded);
}

TEST(Evidence, GroundTruthAlwaysResolves) {
  for (const auto& b : bundles()) {
    for (const auto& f : b.ground_truth.findings) {
      for (const auto& ref : f.evidence) EXPECT_TRUE(resolves(ref, b)) << f.finding_id << " " << ref.value;
    }
  }
}

TEST(ScoreCase, CrashAndNoReport) {
  const auto& b = bundles()[0];
  harness::SessionTranscript t;
  t.case_id = b.manifest.case_id;
  t.status = harness::SessionStatus::error;
  const CaseScore crashed = score_case(b, std::nullopt, t, {});
  EXPECT_EQ(crashed.status, CaseStatus::crashed);
  EXPECT_FALSE(crashed.scorable());
  EXPECT_EQ(crashed.predicted, Verdict::FP);
  EXPECT_EQ(crashed.m2.novel_found, 0u);
  EXPECT_EQ(crashed.m2.novel_total, b.ground_truth.novel_count());
  t.status = harness::SessionStatus::no_report;
  const CaseScore silent = score_case(b, std::nullopt, t, {});
  EXPECT_EQ(silent.status, CaseStatus::no_report);
  EXPECT_TRUE(silent.scorable());
  EXPECT_EQ(silent.predicted, Verdict::FP);
}

TEST(Aggregate, HandFixture) {
  std::vector<CaseScore> s = {
      make_score("a1", Category::brute_force, Verdict::TP, Verdict::TP, 3, 4),
      make_score("a2", Category::brute_force, Verdict::TP, Verdict::FP, 1, 2),
      make_score("a3", Category::brute_force, Verdict::FP, Verdict::FP),
      make_score("b1", Category::misconfiguration, Verdict::TP, Verdict::TP, 6, 6),
      make_score("b2", Category::misconfiguration, Verdict::FP, Verdict::TP),
      make_score("b3", Category::misconfiguration, Verdict::FP, Verdict::FP),
  };
  EvalOptions opt;
  const BenchmarkSummary sum = aggregate(s, ValidationMode::raw, opt);
  EXPECT_EQ(sum.overall.n, 6u);
  EXPECT_EQ(sum.overall.m1.tp.hits, 2u);
  EXPECT_EQ(sum.overall.m1.tp.total, 3u);
  EXPECT_EQ(sum.overall.m1.fp.hits, 2u);
  EXPECT_EQ(sum.overall.m1.fp.total, 3u);
  EXPECT_NEAR(*sum.overall.f_beta, f_beta(2.0 / 3, 2.0 / 3, 3), 1e-12);
  EXPECT_NEAR(*sum.overall.avg_novel_found, 10.0 / 3, 1e-12);
  EXPECT_NEAR(*sum.overall.novel_coverage, (0.75 + 0.5 + 1.0) / 3, 1e-12);
  EXPECT_NEAR(*sum.overall.threshold_curve.at(3), 2.0 / 3, 1e-12);
  EXPECT_NEAR(*sum.overall.threshold_curve.at(7), 0.0, 1e-12);
  ASSERT_EQ(sum.categories.size(), 2u);
  EXPECT_NEAR(*sum.categories.at(Category::brute_force).m1.tp.value(), 0.5, 1e-12);
  EXPECT_NEAR(*sum.categories.at(Category::misconfiguration).m1.fp.value(), 0.5, 1e-12);
  EXPECT_NEAR(*sum.overall.m3, 1.0, 1e-12);

  // A beta of 1 weighs the two rates evenly, so it can only differ from beta 3 when they differ.
  opt.beta = 1;
  EXPECT_NEAR(*aggregate(s, ValidationMode::raw, opt).overall.f_beta, 2.0 / 3, 1e-12);
}

TEST(Aggregate, PoolsRatherThanAveragesCategories) {
  std::vector<CaseScore> s = {
      make_score("a", Category::brute_force, Verdict::TP, Verdict::TP),
      make_score("b", Category::unauthorized_access, Verdict::TP, Verdict::TP),
      make_score("c", Category::unauthorized_access, Verdict::TP, Verdict::FP),
      make_score("d", Category::unauthorized_access, Verdict::TP, Verdict::FP),
  };
  const auto sum = aggregate(s, ValidationMode::raw, {});
  EXPECT_NEAR(*sum.overall.m1.tp.value(), 0.5, 1e-12);
  EXPECT_NEAR(*sum.categories.at(Category::unauthorized_access).m1.tp.value(), 1.0 / 3, 1e-12);
}

TEST(Aggregate, SingleCategoryEqualsOverall) {
  std::vector<CaseScore> s = {make_score("a", Category::brute_force, Verdict::TP, Verdict::TP, 2, 3),
                              make_score("b", Category::brute_force, Verdict::FP, Verdict::TP)};
  const auto sum = aggregate(s, ValidationMode::raw, {});
  EXPECT_EQ(summary_to_json({sum.mode, sum.beta, sum.tau, sum.categories.at(Category::brute_force), {}})["overall"],
            summary_to_json(sum)["overall"]);
}

TEST(Aggregate, OrderDoesNotMatter) {
  std::vector<CaseScore> s;
  Rng rng(4);
  for (int i = 0; i < 40; ++i) {
    s.push_back(make_score("c" + std::to_string(i), kAllCategories[rng.below(4)], rng.chance(1, 2) ? Verdict::TP : Verdict::FP,
                           rng.chance(1, 2) ? Verdict::TP : Verdict::FP, rng.below(5), 4));
  }
  auto shuffled = s;
  std::reverse(shuffled.begin(), shuffled.end());
  EXPECT_EQ(summary_to_json(aggregate(s, ValidationMode::raw, {})), summary_to_json(aggregate(shuffled, ValidationMode::raw, {})));
}

TEST(Aggregate, ValidatedNeverExceedsRawAndSandwich) {
  EvalOptions opt;
  std::vector<CaseScore> oracle_scores, parrot_scores;
  for (const auto& b : bundles()) {
    const auto o = run(harness::oracle_agent([&](const std::string&) { return b.ground_truth; }), b);
    oracle_scores.push_back(score_case(b, o.report, o.transcript, opt));
    const auto p = run(harness::parrot_agent(), b);
    parrot_scores.push_back(score_case(b, p.report, p.transcript, opt));
  }
  for (const auto* scores : {&oracle_scores, &parrot_scores}) {
    const auto raw = aggregate(*scores, ValidationMode::raw, opt);
    const auto val = aggregate(*scores, ValidationMode::validated, opt);
    EXPECT_LE(*val.overall.m1.tp.value(), *raw.overall.m1.tp.value());
    EXPECT_EQ(*val.overall.m1.fp.value(), *raw.overall.m1.fp.value());
  }
  const auto o = aggregate(oracle_scores, ValidationMode::validated, opt).overall;
  EXPECT_DOUBLE_EQ(*o.m1.tp.value(), 1.0);
  EXPECT_DOUBLE_EQ(*o.novel_coverage, 1.0);
  EXPECT_DOUBLE_EQ(*o.m3, 1.0);
  const auto p = aggregate(parrot_scores, ValidationMode::validated, opt).overall;
  EXPECT_DOUBLE_EQ(*p.m1.tp.value(), 0.0);
  EXPECT_DOUBLE_EQ(*p.avg_novel_found, 0.0);
}

TEST(Summary, JsonRoundTripAndRendering) {
  std::vector<CaseScore> s = {make_score("a", Category::brute_force, Verdict::TP, Verdict::TP, 2, 3),
                              make_score("b", Category::misconfiguration, Verdict::FP, Verdict::FP)};
  const auto sum = aggregate(s, ValidationMode::validated, {});
  const ojson j = summary_to_json(sum);
  EXPECT_EQ(summary_to_json(summary_from_json(j)), j);
  const std::string md = render_markdown(sum);
  EXPECT_NE(md.find("Triage accuracy"), std::string::npos);
  EXPECT_NE(md.find("n/a"), std::string::npos);  // FP-only category has no TP rate
  const std::string csv = render_csv(sum);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);  // header, overall, two categories
  EXPECT_THROW(summary_from_json(ojson{{"mode", "raw"}}), Error);
}
