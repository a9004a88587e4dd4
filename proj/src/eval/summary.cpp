// SPDX-License-Identifier: Apache-2.0
#include "irbench/eval/summary.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace irbench::eval {

std::string_view to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::scored: return "scored";
    case CaseStatus::no_report: return "no_report";
    case CaseStatus::crashed: return "crashed";
  }
  return "?";
}

std::string_view to_string(ValidationMode m) { return m == ValidationMode::raw ? "raw" : "validated"; }

Verdict CaseScore::validated_prediction() const {
  if (predicted == Verdict::TP && evidence.outcome == EvidenceOutcome::downgraded) return Verdict::FP;
  return predicted;
}

CaseScore score_case(const scenario::CaseBundle& bundle, const std::optional<harness::InvestigationReport>& report,
                     const std::optional<harness::SessionTranscript>& transcript, const EvalOptions& options) {
  CaseScore s;
  s.case_id = bundle.manifest.case_id;
  s.category = bundle.manifest.category;
  s.actual = bundle.ground_truth.verdict;
  const bool crashed = !report && transcript && transcript->status == harness::SessionStatus::error;
  if (crashed) {
    s.status = CaseStatus::crashed;
    s.predicted = s.actual == Verdict::TP ? Verdict::FP : Verdict::TP;
    // Still record ground-truth totals so coverage denominators stay honest.
    s.m2 = score_m2({}, bundle.ground_truth, options.tau);
    s.evidence = {EvidenceOutcome::not_applicable, std::nullopt};
    return s;
  }
  harness::InvestigationReport r;
  if (report) {
    r = *report;
  } else {
    s.status = CaseStatus::no_report;
    r.case_id = s.case_id;
    r.verdict = Verdict::FP;
  }
  s.predicted = r.verdict;
  s.m2 = score_m2(r.statements(), bundle.ground_truth, options.tau);
  if (transcript) s.m3 = score_m3(*transcript, s.category, options.expected_tools);
  s.evidence = validate_evidence(r, bundle, options.k_min);
  return s;
}

namespace {

std::optional<double> mean(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

GroupSummary fold(const std::vector<const CaseScore*>& cases, ValidationMode mode, const EvalOptions& options) {
  GroupSummary g;
  std::vector<LabeledVerdict> verdicts;
  std::vector<double> novel_found, coverage, recall, m3;
  std::vector<std::size_t> counts;
  for (const CaseScore* c : cases) {
    g.n += 1;
    (c->actual == Verdict::TP ? g.n_tp : g.n_fp) += 1;
    if (!c->scorable()) g.unscorable += 1;
    if (c->status == CaseStatus::no_report) g.no_report += 1;
    if (c->evidence.outcome == EvidenceOutcome::downgraded) g.downgraded += 1;
    verdicts.push_back({mode == ValidationMode::validated ? c->validated_prediction() : c->predicted, c->actual});
    if (c->scorable() && c->m3) m3.push_back(*c->m3);
    if (c->actual != Verdict::TP || !c->scorable()) continue;
    novel_found.push_back(static_cast<double>(c->m2.novel_found));
    counts.push_back(c->m2.novel_found);
    if (c->m2.novel_recall) coverage.push_back(*c->m2.novel_recall);
    if (c->m2.recall) recall.push_back(*c->m2.recall);
  }
  g.m1 = score_m1(verdicts);
  g.f_beta = f_beta(g.m1.tp.value(), g.m1.fp.value(), options.beta);
  g.avg_novel_found = mean(novel_found);
  g.novel_coverage = mean(coverage);
  g.m2_recall = mean(recall);
  g.m3 = mean(m3);
  for (std::size_t n : options.thresholds) g.threshold_curve[n] = m2_threshold(counts, n);
  return g;
}

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

ojson rate_json(const Rate& r) { return {{"hits", r.hits}, {"total", r.total}, {"value", opt(r.value())}}; }

ojson group_json(const GroupSummary& g) {
  ojson curve = ojson::object();
  for (const auto& [n, v] : g.threshold_curve) curve[std::to_string(n)] = opt(v);
  return {{"n", g.n},
          {"n_tp", g.n_tp},
          {"n_fp", g.n_fp},
          {"unscorable", g.unscorable},
          {"no_report", g.no_report},
          {"downgraded", g.downgraded},
          {"m1_tp", rate_json(g.m1.tp)},
          {"m1_fp", rate_json(g.m1.fp)},
          {"f_beta", opt(g.f_beta)},
          {"avg_novel_found", opt(g.avg_novel_found)},
          {"novel_coverage", opt(g.novel_coverage)},
          {"m2_recall", opt(g.m2_recall)},
          {"threshold_curve", curve},
          {"m3_tool_coverage", opt(g.m3)}};
}

std::string pct(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *v * 100.0);
  return buf;
}

std::string num(const std::optional<double>& v, int digits = 3) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

std::string csv_num(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

}  // namespace

BenchmarkSummary aggregate(std::vector<CaseScore> scores, ValidationMode mode, const EvalOptions& options) {
  std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  BenchmarkSummary s;
  s.mode = mode;
  s.beta = options.beta;
  s.tau = options.tau;
  std::vector<const CaseScore*> all;
  std::map<Category, std::vector<const CaseScore*>> by_category;
  for (const auto& c : scores) {
    all.push_back(&c);
    by_category[c.category].push_back(&c);
  }
  s.overall = fold(all, mode, options);
  for (const auto& [c, list] : by_category) s.categories[c] = fold(list, mode, options);
  return s;
}

ojson case_score_to_json(const CaseScore& s) {
  ojson j = {{"case_id", s.case_id},
             {"category", std::string(to_string(s.category))},
             {"actual", std::string(to_string(s.actual))},
             {"predicted", std::string(to_string(s.predicted))},
             {"status", std::string(to_string(s.status))},
             {"m2_recall", opt(s.m2.recall)},
             {"m2_novel_recall", opt(s.m2.novel_recall)},
             {"novel_found", s.m2.novel_found},
             {"novel_total", s.m2.novel_total},
             {"m3_tool_coverage", opt(s.m3)},
             {"evidence", std::string(to_string(s.evidence.outcome))}};
  j["downgrade_reason"] = s.evidence.reason ? ojson(std::string(to_string(*s.evidence.reason))) : ojson(nullptr);
  return j;
}

ojson summary_to_json(const BenchmarkSummary& s) {
  ojson cats = ojson::object();
  for (const auto& [c, g] : s.categories) cats[std::string(to_string(c))] = group_json(g);
  return {{"mode", std::string(to_string(s.mode))},
          {"beta", s.beta},
          {"tau", s.tau},
          {"overall", group_json(s.overall)},
          {"categories", cats}};
}

namespace {

std::optional<double> opt_from(const ojson& j, const char* key) {
  const ojson& v = field(j, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ParseError(std::string("summary.") + key + ": expected a number or null");
  return v.get<double>();
}

Rate rate_from(const ojson& j) {
  return {static_cast<std::size_t>(get_int(j, "hits")), static_cast<std::size_t>(get_int(j, "total"))};
}

GroupSummary group_from(const ojson& j) {
  GroupSummary g;
  const auto count = [&](const char* key) { return static_cast<std::size_t>(get_int(j, key)); };
  g.n = count("n");
  g.n_tp = count("n_tp");
  g.n_fp = count("n_fp");
  g.unscorable = count("unscorable");
  g.no_report = count("no_report");
  g.downgraded = count("downgraded");
  g.m1.tp = rate_from(field(j, "m1_tp"));
  g.m1.fp = rate_from(field(j, "m1_fp"));
  g.f_beta = opt_from(j, "f_beta");
  g.avg_novel_found = opt_from(j, "avg_novel_found");
  g.novel_coverage = opt_from(j, "novel_coverage");
  g.m2_recall = opt_from(j, "m2_recall");
  const ojson& curve = field(j, "threshold_curve");
  for (const auto& [n, v] : curve.items()) {
    g.threshold_curve[std::stoul(n)] = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
  }
  g.m3 = opt_from(j, "m3_tool_coverage");
  return g;
}

}  // namespace

BenchmarkSummary summary_from_json(const ojson& j) {
  BenchmarkSummary s;
  try {
    const std::string mode = get_string(j, "mode");
    if (mode != "raw" && mode != "validated") throw ParseError("summary.mode: unknown mode '" + mode + "'");
    s.mode = mode == "raw" ? ValidationMode::raw : ValidationMode::validated;
    s.beta = get_double(j, "beta");
    s.tau = get_double(j, "tau");
    s.overall = group_from(field(j, "overall"));
    for (const auto& [name, g] : field(j, "categories").items()) s.categories[category_from_string(name)] = group_from(g);
  } catch (const ValidationError& e) {
    throw ParseError(std::string("summary: ") + e.what());
  } catch (const ojson::exception& e) {
    throw ParseError(std::string("summary: ") + e.what());
  }
  return s;
}

std::string render_markdown(const BenchmarkSummary& s) {
  std::ostringstream out;
  char beta[16];
  std::snprintf(beta, sizeof beta, "%g", s.beta);
  const auto& o = s.overall;
  out << "# Benchmark summary (" << to_string(s.mode) << ")\n\n";

  out << "## Triage accuracy\n\n";
  out << "| Metric | Value | Detail |\n|---|---|---|\n";
  out << "| M1 TP (detection rate) | " << pct(o.m1.tp.value()) << " | " << (o.m1.tp.total - o.m1.tp.hits) << "/"
      << o.m1.tp.total << " missed |\n";
  out << "| M1 FP (rejection rate) | " << pct(o.m1.fp.value()) << " | " << (o.m1.fp.total - o.m1.fp.hits) << "/"
      << o.m1.fp.total << " false alarms |\n";
  out << "| F" << beta << " | " << num(o.f_beta) << " | |\n\n";

  out << "## Triage accuracy by category\n\n";
  out << "| Category | n | M1 TP | M1 FP | F" << beta << " |\n|---|---|---|---|---|\n";
  for (const auto& [c, g] : s.categories) {
    out << "| " << display_name(c) << " | " << g.n << " | " << pct(g.m1.tp.value()) << " | "
        << pct(g.m1.fp.value()) << " | " << num(g.f_beta) << " |\n";
  }
  out << "| Overall | " << o.n << " | " << pct(o.m1.tp.value()) << " | " << pct(o.m1.fp.value()) << " | "
      << num(o.f_beta) << " |\n\n";

  out << "## Investigation depth\n\n";
  out << "| Metric | Value |\n|---|---|\n";
  out << "| Avg novel findings per TP case | " << num(o.avg_novel_found, 2) << " |\n";
  out << "| Novel finding coverage | " << pct(o.novel_coverage) << " |\n";
  out << "| Finding recall (all) | " << pct(o.m2_recall) << " |\n";
  for (const auto& [n, v] : o.threshold_curve) out << "| Cases with " << n << "+ novel findings | " << pct(v) << " |\n";
  out << "\n## Novel finding coverage by category\n\n";
  out << "| Category | Avg novel | Coverage |";
  for (const auto& [n, v] : o.threshold_curve) out << " Hit " << n << "+ |";
  out << "\n|---|---|---|";
  for (std::size_t i = 0; i < o.threshold_curve.size(); ++i) out << "---|";
  out << "\n";
  const auto depth_row = [&](const std::string& name, const GroupSummary& g) {
    out << "| " << name << " | " << num(g.avg_novel_found, 2) << " | " << pct(g.novel_coverage) << " |";
    for (const auto& [n, v] : g.threshold_curve) out << " " << pct(v) << " |";
    out << "\n";
  };
  for (const auto& [c, g] : s.categories) depth_row(std::string(display_name(c)), g);
  depth_row("Overall", o);

  out << "\n## Tool coverage\n\n| Category | M3 |\n|---|---|\n";
  for (const auto& [c, g] : s.categories) out << "| " << display_name(c) << " | " << pct(g.m3) << " |\n";
  out << "| Overall | " << pct(o.m3) << " |\n";

  out << "\n## Sessions\n\n| Category | n | TP | FP | No report | Unscorable | Downgraded |\n|---|---|---|---|---|---|---|\n";
  for (const auto& [c, g] : s.categories) {
    out << "| " << display_name(c) << " | " << g.n << " | " << g.n_tp << " | " << g.n_fp << " | " << g.no_report
        << " | " << g.unscorable << " | " << g.downgraded << " |\n";
  }
  out << "| Overall | " << o.n << " | " << o.n_tp << " | " << o.n_fp << " | " << o.no_report << " | "
      << o.unscorable << " | " << o.downgraded << " |\n";
  return out.str();
}

std::string render_csv(const BenchmarkSummary& s) {
  std::ostringstream out;
  out << "group,n,n_tp,n_fp,m1_tp,m1_fp,f_beta,avg_novel_found,novel_coverage,m2_recall";
  for (const auto& [n, v] : s.overall.threshold_curve) out << ",hit_" << n;
  out << ",m3_tool_coverage,no_report,unscorable,downgraded\n";
  const auto row = [&](const std::string& name, const GroupSummary& g) {
    out << name << ',' << g.n << ',' << g.n_tp << ',' << g.n_fp << ',' << csv_num(g.m1.tp.value()) << ','
        << csv_num(g.m1.fp.value()) << ',' << csv_num(g.f_beta) << ',' << csv_num(g.avg_novel_found) << ','
        << csv_num(g.novel_coverage) << ',' << csv_num(g.m2_recall);
    for (const auto& [n, v] : g.threshold_curve) out << ',' << csv_num(v);
    out << ',' << csv_num(g.m3) << ',' << g.no_report << ',' << g.unscorable << ',' << g.downgraded << '\n';
  };
  for (const auto& [c, g] : s.categories) row(std::string(to_string(c)), g);
  row("overall", s.overall);
  return out.str();
}

}  // namespace irbench::eval
