// SPDX-License-Identifier: Apache-2.0
#include "irbench/variation/validate.hpp"

#include <algorithm>

#include "irbench/scenario/rulebook.hpp"

namespace irbench::variation {

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::structure: return "structure";
    case RejectReason::generation: return "generation";
    case RejectReason::verdict_mismatch: return "verdict_mismatch";
    case RejectReason::insufficient_artifacts: return "insufficient_artifacts";
    case RejectReason::missing_benign_evidence: return "missing_benign_evidence";
  }
  return "?";
}

ValidationResult validate_variation(const scenario::ScenarioSpec& spec, const ValidationOptions& options,
                                    const std::string& case_id) {
  ValidationResult out;
  try {
    scenario::validate(spec);
  } catch (const ValidationError& e) {
    out.rejections.push_back({RejectReason::structure, e.what()});
    return out;
  }
  try {
    out.execution = scenario::execute_scenario(spec, options.dry_run_seed, case_id);
  } catch (const ValidationError& e) {
    out.rejections.push_back({RejectReason::generation, e.what()});
    return out;
  }
  const auto& gt = out.execution->bundle.ground_truth;
  if (gt.verdict != spec.intended_verdict) {
    out.rejections.push_back({RejectReason::verdict_mismatch, "extracted verdict " + std::string(to_string(gt.verdict))});
  }
  if (spec.intended_verdict == Verdict::TP) {
    const auto n = static_cast<int>(gt.novel_count());
    if (n < options.min_tp_findings) {
      out.rejections.push_back({RejectReason::insufficient_artifacts,
                                std::to_string(n) + " evidenced findings, need " + std::to_string(options.min_tp_findings)});
    }
  } else {
    const auto n = static_cast<int>(std::count_if(gt.findings.begin(), gt.findings.end(), [](const auto& f) {
      const auto* rule = scenario::find_rule(f.rule_id);
      return rule && rule->benign && !f.evidence.empty();
    }));
    if (n < options.min_fp_benign) {
      out.rejections.push_back({RejectReason::missing_benign_evidence,
                                std::to_string(n) + " benign findings, need " + std::to_string(options.min_fp_benign)});
    }
  }
  if (!out.accepted()) out.execution.reset();
  return out;
}

}  // namespace irbench::variation
