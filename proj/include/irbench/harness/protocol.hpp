// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irbench/core/category.hpp"
#include "irbench/core/errors.hpp"
#include "irbench/core/json.hpp"
#include "irbench/scenario/ground_truth.hpp"

namespace irbench::harness {

// Messages are single-line JSON objects with a "type" field:
//   harness -> agent: case_start, tool_result
//   agent -> harness: tool_call, final_report
// See docs/protocol.md.

struct Claim {
  std::string statement;
  std::vector<scenario::EvidenceArtifact> evidence_refs;

  friend bool operator==(const Claim&, const Claim&) = default;
};

struct InvestigationReport {
  std::string case_id;
  Verdict verdict = Verdict::FP;
  std::vector<Claim> claims;
  std::optional<std::string> narrative;

  std::vector<std::string> statements() const;

  friend bool operator==(const InvestigationReport&, const InvestigationReport&) = default;
};

struct ToolCall {
  std::string call_id;
  std::string tool;
  ojson parameters = ojson::object();
};

struct ToolResult {
  std::string call_id;
  bool ok = true;
  ojson payload;      // when ok
  std::string error;  // when not ok
};

enum class SessionStatus {
  completed,   // final report received
  call_limit,  // agent asked for one call more than allowed
  timeout,
  no_report,   // agent ended the session cleanly without reporting
  error,       // crash or protocol violation
};

std::string_view to_string(SessionStatus s);
SessionStatus session_status_from_string(std::string_view text);

struct TranscriptEntry {
  ToolCall call;
  ToolResult result;
};

struct SessionTranscript {
  std::string case_id;
  std::vector<TranscriptEntry> entries;
  std::size_t call_count = 0;
  std::int64_t wall_time_ms = 0;
  SessionStatus status = SessionStatus::completed;
  std::optional<std::string> error;

  // Distinct tool names in first-use order.
  std::vector<std::string> tools_used() const;
};

ojson claim_to_json(const Claim& c);
Claim claim_from_json(const ojson& j);
ojson report_to_json(const InvestigationReport& r);
InvestigationReport report_from_json(const ojson& j);

ojson tool_call_to_json(const ToolCall& c);  // includes "type"
ToolCall tool_call_from_json(const ojson& j);
ojson tool_result_to_json(const ToolResult& r);  // includes "type"
ToolResult tool_result_from_json(const ojson& j);

ojson transcript_to_json(const SessionTranscript& t);
SessionTranscript transcript_from_json(const ojson& j);

}  // namespace irbench::harness
