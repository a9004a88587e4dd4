// SPDX-License-Identifier: Apache-2.0
#include "irbench/eval/evidence.hpp"

#include <algorithm>

namespace irbench::eval {

using scenario::EvidenceKind;

std::string_view to_string(EvidenceOutcome o) {
  switch (o) {
    case EvidenceOutcome::upheld: return "upheld";
    case EvidenceOutcome::downgraded: return "downgraded";
    case EvidenceOutcome::not_applicable: return "not_applicable";
  }
  return "?";
}

std::string_view to_string(DowngradeReason r) {
  switch (r) {
    case DowngradeReason::no_evidence: return "no_evidence";
    case DowngradeReason::alert_only_evidence: return "alert_only_evidence";
    case DowngradeReason::unresolvable_refs: return "unresolvable_refs";
  }
  return "?";
}

namespace {

bool event_mentions(const telemetry::CloudEvent& e, const std::string& arn) {
  if (e.user_identity.arn && e.user_identity.arn->render() == arn) return true;
  const auto has = [&](const telemetry::FieldMap& m) {
    return std::any_of(m.begin(), m.end(), [&](const auto& kv) { return kv.second == arn; });
  };
  return has(e.request_parameters) || has(e.response_elements);
}

}  // namespace

bool resolves(const scenario::EvidenceArtifact& ref, const scenario::CaseBundle& bundle) {
  const auto& log = bundle.log;
  switch (ref.kind) {
    case EvidenceKind::event_id:
      return log.find(ref.value) != nullptr;
    case EvidenceKind::arn: {
      Arn arn;
      try {
        arn = Arn::parse(ref.value);
      } catch (const ParseError&) {
        return false;
      }
      if (cloud::lookup_resource(bundle.environment, arn)) return true;
      const auto events = log.events();
      return std::any_of(events.begin(), events.end(), [&](const auto& e) { return event_mentions(e, ref.value); });
    }
    case EvidenceKind::timestamp: {
      if (log.empty()) return false;
      try {
        const Timestamp t = parse_rfc3339(ref.value);
        return t >= log[0].event_time && t <= log[log.size() - 1].event_time;
      } catch (const ParseError&) {
        return false;
      }
    }
  }
  return false;
}

EvidenceValidation validate_evidence(const harness::InvestigationReport& report, const scenario::CaseBundle& bundle,
                                     std::size_t k_min) {
  if (report.verdict == Verdict::FP) return {EvidenceOutcome::not_applicable, std::nullopt};
  const auto& triggers = bundle.alert.triggering_event_ids;
  const auto is_trigger = [&](const std::string& id) {
    return std::find(triggers.begin(), triggers.end(), id) != triggers.end();
  };
  std::size_t qualifying = 0;
  bool any_ref = false;
  bool any_unresolvable = false;
  for (const auto& claim : report.claims) {
    if (claim.evidence_refs.empty()) continue;
    any_ref = true;
    bool all_resolve = true;
    bool beyond_alert = false;
    for (const auto& ref : claim.evidence_refs) {
      if (!resolves(ref, bundle)) {
        all_resolve = false;
        any_unresolvable = true;
        continue;
      }
      if (ref.kind == EvidenceKind::event_id && !is_trigger(ref.value)) beyond_alert = true;
    }
    if (all_resolve && beyond_alert) qualifying += 1;
  }
  if (qualifying >= k_min) return {EvidenceOutcome::upheld, std::nullopt};
  DowngradeReason reason = DowngradeReason::alert_only_evidence;
  if (!any_ref) {
    reason = DowngradeReason::no_evidence;
  } else if (any_unresolvable) {
    reason = DowngradeReason::unresolvable_refs;
  }
  return {EvidenceOutcome::downgraded, reason};
}

}  // namespace irbench::eval
