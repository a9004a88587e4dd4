// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irbench/eval/evidence.hpp"
#include "irbench/eval/metrics.hpp"

namespace irbench::eval {

struct EvalOptions {
  double tau = kDefaultTau;
  double beta = kDefaultBeta;
  std::size_t k_min = 1;
  std::vector<std::size_t> thresholds = {3, 5, 7};
  ExpectedTools expected_tools = default_expected_tools();
};

// How the agent's session ended, as far as scoring is concerned.
enum class CaseStatus {
  scored,     // report present
  no_report,  // scored as FP with zero claims
  crashed,    // verdict counted as missed; excluded from M2/M3
};

std::string_view to_string(CaseStatus s);

struct CaseScore {
  std::string case_id;
  Category category = Category::brute_force;
  Verdict actual = Verdict::FP;
  Verdict predicted = Verdict::FP;  // raw verdict as scored
  CaseStatus status = CaseStatus::scored;
  M2 m2;
  std::optional<double> m3;  // undefined when crashed or no transcript
  EvidenceValidation evidence;

  bool scorable() const { return status != CaseStatus::crashed; }
  // Verdict after evidence validation: downgraded TP calls count as FP.
  Verdict validated_prediction() const;
};

// Missing report and transcript is the same as a clean no_report session.
CaseScore score_case(const scenario::CaseBundle& bundle, const std::optional<harness::InvestigationReport>& report,
                     const std::optional<harness::SessionTranscript>& transcript, const EvalOptions& options);

enum class ValidationMode { raw, validated };

std::string_view to_string(ValidationMode m);

struct GroupSummary {
  std::size_t n = 0;
  std::size_t n_tp = 0;
  std::size_t n_fp = 0;
  std::size_t unscorable = 0;
  std::size_t no_report = 0;
  std::size_t downgraded = 0;
  M1 m1;
  std::optional<double> f_beta;
  // Over scorable TP-labeled cases.
  std::optional<double> avg_novel_found;
  std::optional<double> novel_coverage;
  std::optional<double> m2_recall;
  std::map<std::size_t, std::optional<double>> threshold_curve;
  // Over cases with a transcript.
  std::optional<double> m3;
};

struct BenchmarkSummary {
  ValidationMode mode = ValidationMode::raw;
  double beta = kDefaultBeta;
  double tau = kDefaultTau;
  GroupSummary overall;
  std::map<Category, GroupSummary> categories;
};

// Folds in case-id order; overall rates come from pooled counts.
BenchmarkSummary aggregate(std::vector<CaseScore> scores, ValidationMode mode, const EvalOptions& options);

ojson case_score_to_json(const CaseScore& s);
ojson summary_to_json(const BenchmarkSummary& s);
BenchmarkSummary summary_from_json(const ojson& j);
std::string render_markdown(const BenchmarkSummary& s);
std::string render_csv(const BenchmarkSummary& s);

}  // namespace irbench::eval
