// SPDX-License-Identifier: Apache-2.0
#include "irbench/harness/protocol.hpp"

#include <algorithm>

namespace irbench::harness {

std::vector<std::string> InvestigationReport::statements() const {
  std::vector<std::string> out;
  out.reserve(claims.size());
  for (const auto& c : claims) out.push_back(c.statement);
  return out;
}

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::completed: return "completed";
    case SessionStatus::call_limit: return "call_limit";
    case SessionStatus::timeout: return "timeout";
    case SessionStatus::no_report: return "no_report";
    case SessionStatus::error: return "error";
  }
  return "?";
}

SessionStatus session_status_from_string(std::string_view text) {
  for (auto s : {SessionStatus::completed, SessionStatus::call_limit, SessionStatus::timeout,
                 SessionStatus::no_report, SessionStatus::error}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown session status '" + std::string(text) + "'");
}

std::vector<std::string> SessionTranscript::tools_used() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (std::find(out.begin(), out.end(), e.call.tool) == out.end()) out.push_back(e.call.tool);
  }
  return out;
}

ojson claim_to_json(const Claim& c) {
  ojson refs = ojson::array();
  for (const auto& e : c.evidence_refs) refs.push_back(scenario::evidence_to_json(e));
  return {{"statement", c.statement}, {"evidence_refs", refs}};
}

Claim claim_from_json(const ojson& j) {
  Claim c;
  c.statement = get_string(j, "statement");
  if (j.contains("evidence_refs")) {
    for (const auto& e : get_array(j, "evidence_refs")) c.evidence_refs.push_back(scenario::evidence_from_json(e));
  }
  return c;
}

ojson report_to_json(const InvestigationReport& r) {
  ojson claims = ojson::array();
  for (const auto& c : r.claims) claims.push_back(claim_to_json(c));
  ojson j = {{"case_id", r.case_id}, {"verdict", std::string(to_string(r.verdict))}, {"claims", claims}};
  j["narrative"] = r.narrative ? ojson(*r.narrative) : ojson(nullptr);
  return j;
}

InvestigationReport report_from_json(const ojson& j) {
  if (!j.is_object()) throw ParseError("report: expected an object");
  InvestigationReport r;
  r.case_id = string_or(j, "case_id", "");
  try {
    r.verdict = verdict_from_string(get_string(j, "verdict"));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("report.verdict: ") + e.what());
  }
  if (j.contains("claims")) {
    for (const auto& c : get_array(j, "claims")) r.claims.push_back(claim_from_json(c));
  }
  r.narrative = get_opt_string(j, "narrative");
  return r;
}

ojson tool_call_to_json(const ToolCall& c) {
  return {{"type", "tool_call"}, {"call_id", c.call_id}, {"tool", c.tool}, {"parameters", c.parameters}};
}

ToolCall tool_call_from_json(const ojson& j) {
  ToolCall c;
  c.call_id = get_string(j, "call_id");
  c.tool = get_string(j, "tool");
  if (j.contains("parameters") && !j.at("parameters").is_null()) {
    if (!j.at("parameters").is_object()) throw ParseError("tool_call.parameters: expected an object");
    c.parameters = j.at("parameters");
  }
  return c;
}

ojson tool_result_to_json(const ToolResult& r) {
  ojson j = {{"type", "tool_result"}, {"call_id", r.call_id}, {"ok", r.ok}};
  if (r.ok) {
    j["payload"] = r.payload;
  } else {
    j["error"] = r.error;
  }
  return j;
}

ToolResult tool_result_from_json(const ojson& j) {
  ToolResult r;
  r.call_id = get_string(j, "call_id");
  r.ok = get_bool(j, "ok");
  if (r.ok) {
    r.payload = field(j, "payload");
  } else {
    r.error = get_string(j, "error");
  }
  return r;
}

ojson transcript_to_json(const SessionTranscript& t) {
  ojson entries = ojson::array();
  for (const auto& e : t.entries) {
    ojson call = tool_call_to_json(e.call);
    call.erase("type");
    ojson result = tool_result_to_json(e.result);
    result.erase("type");
    entries.push_back({{"call", call}, {"result", result}});
  }
  ojson j = {{"case_id", t.case_id},
             {"status", std::string(to_string(t.status))},
             {"call_count", t.call_count},
             {"wall_time_ms", t.wall_time_ms}};
  j["error"] = t.error ? ojson(*t.error) : ojson(nullptr);
  j["entries"] = entries;
  return j;
}

SessionTranscript transcript_from_json(const ojson& j) {
  SessionTranscript t;
  t.case_id = get_string(j, "case_id");
  t.status = session_status_from_string(get_string(j, "status"));
  t.call_count = static_cast<std::size_t>(get_int(j, "call_count"));
  t.wall_time_ms = get_int(j, "wall_time_ms");
  t.error = get_opt_string(j, "error");
  for (const auto& e : get_array(j, "entries")) {
    t.entries.push_back({tool_call_from_json(field(e, "call")), tool_result_from_json(field(e, "result"))});
  }
  if (t.call_count != t.entries.size()) throw ParseError("transcript: call_count does not match entries");
  return t;
}

}  // namespace irbench::harness
