// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "irbench/core/category.hpp"
#include "irbench/core/json.hpp"
#include "irbench/harness/protocol.hpp"
#include "irbench/scenario/ground_truth.hpp"

namespace irbench::eval {

inline constexpr double kDefaultTau = 0.42;
inline constexpr double kDefaultBeta = 3.0;

struct FindingMatch {
  bool matched = false;
  std::optional<std::size_t> best_claim;  // none when there are no claims
  double best_score = 0.0;
};

// One entry per ground-truth finding, in ground-truth order.
struct MatchResult {
  std::vector<FindingMatch> findings;
};

// Max-pooled ROUGE-L per ground-truth finding; matched iff best > tau. One
// claim may match several findings. Throws ValidationError unless 0 < tau < 1.
MatchResult match_findings(const std::vector<std::string>& claims, const scenario::GroundTruth& truth,
                           double tau = kDefaultTau);

// hits / total with an explicit undefined state for total == 0.
struct Rate {
  std::size_t hits = 0;
  std::size_t total = 0;

  std::optional<double> value() const;
};

struct M1 {
  Rate tp;  // predicted TP among TP-labeled
  Rate fp;  // predicted FP among FP-labeled
};

struct LabeledVerdict {
  Verdict predicted = Verdict::FP;
  Verdict actual = Verdict::FP;
};

M1 score_m1(std::span<const LabeledVerdict> results);

// (1+b^2) * tp * fp / (b^2 * fp + tp); 0 when both rates are 0.
double f_beta(double m1_tp, double m1_fp, double beta = kDefaultBeta);
std::optional<double> f_beta(const std::optional<double>& m1_tp, const std::optional<double>& m1_fp,
                             double beta = kDefaultBeta);

struct M2 {
  std::optional<double> recall;        // undefined when there are no findings
  std::optional<double> novel_recall;  // undefined when there are no novel findings
  std::size_t novel_found = 0;
  std::size_t novel_total = 0;
  std::size_t matched = 0;
};

M2 score_m2(const std::vector<std::string>& claims, const scenario::GroundTruth& truth, double tau = kDefaultTau);

// Fraction of cases with at least n novel findings; undefined for no cases.
std::optional<double> m2_threshold(std::span<const std::size_t> novel_found_counts, std::size_t n);

using ExpectedTools = std::map<Category, std::vector<std::string>>;

ExpectedTools default_expected_tools();
ojson expected_tools_to_json(const ExpectedTools& t);
// Keys are category names; unknown names or tools raise ValidationError.
ExpectedTools expected_tools_from_json(const ojson& j);

// Distinct expected tools invoked / expected tools for the category. Throws
// ValidationError when the table lacks the category.
double score_m3(const harness::SessionTranscript& transcript, Category category, const ExpectedTools& table);

}  // namespace irbench::eval
