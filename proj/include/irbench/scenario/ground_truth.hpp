// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "irbench/core/category.hpp"
#include "irbench/core/json.hpp"
#include "irbench/core/time.hpp"

namespace irbench::scenario {

struct Alert {
  std::string alert_id;
  std::string description;
  std::vector<std::string> triggering_event_ids;
  Category category = Category::brute_force;
  Timestamp fired_at = 0;

  friend bool operator==(const Alert&, const Alert&) = default;
};

enum class EvidenceKind { event_id, arn, timestamp };

std::string_view to_string(EvidenceKind k);
EvidenceKind evidence_kind_from_string(std::string_view text);

struct EvidenceArtifact {
  EvidenceKind kind = EvidenceKind::event_id;
  std::string value;

  friend bool operator==(const EvidenceArtifact&, const EvidenceArtifact&) = default;
};

struct Finding {
  std::string finding_id;
  std::string rule_id;
  std::string statement;
  std::vector<EvidenceArtifact> evidence;
  std::vector<std::string> required_tools;  // empty: derivable from the alert
  bool novel = false;

  std::vector<std::string> event_ids() const;

  friend bool operator==(const Finding&, const Finding&) = default;
};

inline constexpr double kDefaultTauAlert = 0.6;

// Novel iff the statement is dissimilar to the alert description
// (ROUGE-L < tau_alert), evidence is non-empty and at least one tool is
// required to find it.
bool classify_novel(const Finding& f, const Alert& alert, double tau_alert = kDefaultTauAlert);

struct GroundTruth {
  Verdict verdict = Verdict::FP;
  std::vector<Finding> findings;
  std::string rulebook_version;

  std::vector<const Finding*> novel_findings() const;
  std::size_t novel_count() const;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

ojson evidence_to_json(const EvidenceArtifact& e);
EvidenceArtifact evidence_from_json(const ojson& j);
ojson alert_to_json(const Alert& a);
Alert alert_from_json(const ojson& j);
ojson ground_truth_to_json(const GroundTruth& g);
GroundTruth ground_truth_from_json(const ojson& j);

}  // namespace irbench::scenario
