// SPDX-License-Identifier: Apache-2.0
#include "irbench/scenario/ground_truth.hpp"

#include "irbench/core/errors.hpp"
#include "irbench/text/rouge.hpp"

namespace irbench::scenario {

std::string_view to_string(EvidenceKind k) {
  switch (k) {
    case EvidenceKind::event_id: return "event_id";
    case EvidenceKind::arn: return "arn";
    case EvidenceKind::timestamp: return "timestamp";
  }
  return "event_id";
}

EvidenceKind evidence_kind_from_string(std::string_view text) {
  if (text == "event_id") return EvidenceKind::event_id;
  if (text == "arn") return EvidenceKind::arn;
  if (text == "timestamp") return EvidenceKind::timestamp;
  throw ParseError("unknown evidence kind '" + std::string(text) + "'");
}

std::vector<std::string> Finding::event_ids() const {
  std::vector<std::string> out;
  for (const auto& e : evidence) {
    if (e.kind == EvidenceKind::event_id) out.push_back(e.value);
  }
  return out;
}

bool classify_novel(const Finding& f, const Alert& alert, double tau_alert) {
  if (f.evidence.empty() || f.required_tools.empty()) return false;
  return text::rouge_l(alert.description, f.statement) < tau_alert;
}

std::vector<const Finding*> GroundTruth::novel_findings() const {
  std::vector<const Finding*> out;
  for (const auto& f : findings) {
    if (f.novel) out.push_back(&f);
  }
  return out;
}

std::size_t GroundTruth::novel_count() const { return novel_findings().size(); }

ojson evidence_to_json(const EvidenceArtifact& e) {
  return {{"kind", std::string(to_string(e.kind))}, {"value", e.value}};
}

EvidenceArtifact evidence_from_json(const ojson& j) {
  return {evidence_kind_from_string(get_string(j, "kind")), get_string(j, "value")};
}

ojson alert_to_json(const Alert& a) {
  return {{"alert_id", a.alert_id},
          {"category", std::string(to_string(a.category))},
          {"description", a.description},
          {"triggering_event_ids", a.triggering_event_ids},
          {"fired_at", format_rfc3339(a.fired_at)}};
}

Alert alert_from_json(const ojson& j) {
  Alert a;
  a.alert_id = get_string(j, "alert_id");
  a.category = category_from_string(get_string(j, "category"));
  a.description = get_string(j, "description");
  a.triggering_event_ids = get_strings(j, "triggering_event_ids");
  a.fired_at = parse_rfc3339(get_string(j, "fired_at"));
  if (a.description.empty()) throw ParseError("alert description must not be empty");
  return a;
}

ojson ground_truth_to_json(const GroundTruth& g) {
  ojson findings = ojson::array();
  ojson novel = ojson::array();
  for (const auto& f : g.findings) {
    ojson ev = ojson::array();
    for (const auto& e : f.evidence) ev.push_back(evidence_to_json(e));
    findings.push_back({{"finding_id", f.finding_id},
                        {"rule_id", f.rule_id},
                        {"statement", f.statement},
                        {"evidence", ev},
                        {"required_tools", f.required_tools},
                        {"novel", f.novel}});
    if (f.novel) novel.push_back(f.finding_id);
  }
  return {{"rulebook_version", g.rulebook_version},
          {"verdict", std::string(to_string(g.verdict))},
          {"findings", findings},
          {"novel_findings", novel}};
}

GroundTruth ground_truth_from_json(const ojson& j) {
  GroundTruth g;
  g.rulebook_version = get_string(j, "rulebook_version");
  g.verdict = verdict_from_string(get_string(j, "verdict"));
  for (const auto& fj : get_array(j, "findings")) {
    Finding f;
    f.finding_id = get_string(fj, "finding_id");
    f.rule_id = get_string(fj, "rule_id");
    f.statement = get_string(fj, "statement");
    for (const auto& e : get_array(fj, "evidence")) f.evidence.push_back(evidence_from_json(e));
    f.required_tools = get_strings(fj, "required_tools");
    f.novel = get_bool(fj, "novel");
    g.findings.push_back(std::move(f));
  }
  std::vector<std::string> listed = get_strings(j, "novel_findings");
  std::vector<std::string> flagged;
  for (const auto* f : g.novel_findings()) flagged.push_back(f->finding_id);
  if (listed != flagged) throw ParseError("novel_findings does not match the findings flagged novel");
  return g;
}

}  // namespace irbench::scenario
