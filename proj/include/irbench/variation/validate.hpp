// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irbench/scenario/execute.hpp"

namespace irbench::variation {

struct ValidationOptions {
  int min_tp_findings = 3;  // evidenced, tool-requiring findings
  int min_fp_benign = 1;    // benign-explanation findings with evidence
  std::uint64_t dry_run_seed = 0;
};

enum class RejectReason { structure, generation, verdict_mismatch, insufficient_artifacts, missing_benign_evidence };

std::string_view to_string(RejectReason r);

struct Rejection {
  RejectReason reason;
  std::string detail;
};

struct ValidationResult {
  std::vector<Rejection> rejections;  // empty: accepted
  // The dry run, kept so callers need not execute an accepted spec twice.
  std::optional<scenario::Execution> execution;

  bool accepted() const { return rejections.empty(); }
};

// Structural checks followed by a dry-run execution and extraction.
ValidationResult validate_variation(const scenario::ScenarioSpec& spec, const ValidationOptions& options = {},
                                    const std::string& case_id = "");

}  // namespace irbench::variation
