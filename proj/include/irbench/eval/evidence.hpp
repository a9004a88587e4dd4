// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

#include "irbench/harness/protocol.hpp"
#include "irbench/scenario/execute.hpp"

namespace irbench::eval {

enum class EvidenceOutcome { upheld, downgraded, not_applicable };
enum class DowngradeReason { no_evidence, alert_only_evidence, unresolvable_refs };

std::string_view to_string(EvidenceOutcome o);
std::string_view to_string(DowngradeReason r);

struct EvidenceValidation {
  EvidenceOutcome outcome = EvidenceOutcome::not_applicable;
  std::optional<DowngradeReason> reason;
};

// An event id resolves when the log has it; an ARN when the environment has
// the resource or some event names it; a timestamp when it parses and falls
// within the log's time span.
bool resolves(const scenario::EvidenceArtifact& ref, const scenario::CaseBundle& bundle);

// A TP verdict stands only when at least k_min claims qualify: every ref of
// the claim resolves and at least one is an event id outside the alert's
// triggering events. FP verdicts are never downgraded.
EvidenceValidation validate_evidence(const harness::InvestigationReport& report, const scenario::CaseBundle& bundle,
                                     std::size_t k_min = 1);

}  // namespace irbench::eval
