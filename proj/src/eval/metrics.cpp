// SPDX-License-Identifier: Apache-2.0
#include "irbench/eval/metrics.hpp"

#include <algorithm>

#include "irbench/harness/agents.hpp"
#include "irbench/harness/tools.hpp"
#include "irbench/text/rouge.hpp"

namespace irbench::eval {

MatchResult match_findings(const std::vector<std::string>& claims, const scenario::GroundTruth& truth, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw ValidationError("tau", "must lie strictly between 0 and 1");
  std::vector<text::Tokens> claim_tokens;
  claim_tokens.reserve(claims.size());
  for (const auto& c : claims) claim_tokens.push_back(text::tokenize(c));

  MatchResult out;
  for (const auto& f : truth.findings) {
    const text::Tokens ref = text::tokenize(f.statement);
    FindingMatch m;
    for (std::size_t i = 0; i < claim_tokens.size(); ++i) {
      const double s = text::rouge_l(ref, claim_tokens[i]);
      if (!m.best_claim || s > m.best_score) {
        m.best_claim = i;
        m.best_score = s;
      }
    }
    m.matched = m.best_score > tau;
    out.findings.push_back(m);
  }
  return out;
}

std::optional<double> Rate::value() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(total);
}

M1 score_m1(std::span<const LabeledVerdict> results) {
  M1 m;
  for (const auto& r : results) {
    Rate& rate = r.actual == Verdict::TP ? m.tp : m.fp;
    rate.total += 1;
    if (r.predicted == r.actual) rate.hits += 1;
  }
  return m;
}

double f_beta(double m1_tp, double m1_fp, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * m1_fp + m1_tp;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * m1_tp * m1_fp / denom;
}

std::optional<double> f_beta(const std::optional<double>& m1_tp, const std::optional<double>& m1_fp, double beta) {
  if (!m1_tp || !m1_fp) return std::nullopt;
  return f_beta(*m1_tp, *m1_fp, beta);
}

M2 score_m2(const std::vector<std::string>& claims, const scenario::GroundTruth& truth, double tau) {
  const MatchResult mr = match_findings(claims, truth, tau);
  M2 m;
  for (std::size_t i = 0; i < truth.findings.size(); ++i) {
    const bool hit = mr.findings[i].matched;
    if (hit) m.matched += 1;
    if (truth.findings[i].novel) {
      m.novel_total += 1;
      if (hit) m.novel_found += 1;
    }
  }
  if (!truth.findings.empty()) m.recall = static_cast<double>(m.matched) / truth.findings.size();
  if (m.novel_total) m.novel_recall = static_cast<double>(m.novel_found) / m.novel_total;
  return m;
}

std::optional<double> m2_threshold(std::span<const std::size_t> counts, std::size_t n) {
  if (counts.empty()) return std::nullopt;
  const auto hits = std::count_if(counts.begin(), counts.end(), [n](std::size_t c) { return c >= n; });
  return static_cast<double>(hits) / static_cast<double>(counts.size());
}

ExpectedTools default_expected_tools() {
  ExpectedTools t;
  for (Category c : kAllCategories) t[c] = harness::default_expected_tools(c);
  return t;
}

ojson expected_tools_to_json(const ExpectedTools& t) {
  ojson j = ojson::object();
  for (const auto& [c, tools] : t) j[std::string(to_string(c))] = tools;
  return j;
}

ExpectedTools expected_tools_from_json(const ojson& j) {
  if (!j.is_object()) throw ValidationError("expected_tools", "expected an object keyed by category");
  ExpectedTools t;
  for (const auto& [name, tools] : j.items()) {
    Category c;
    try {
      c = category_from_string(name);
    } catch (const ValidationError&) {
      throw ValidationError("expected_tools." + name, "unknown category");
    }
    if (!tools.is_array() || tools.empty()) {
      throw ValidationError("expected_tools." + name, "expected a non-empty array of tool names");
    }
    for (const auto& tool : tools) {
      if (!tool.is_string() || !harness::find_tool(tool.get<std::string>())) {
        throw ValidationError("expected_tools." + name, "unknown tool " + tool.dump());
      }
      t[c].push_back(tool.get<std::string>());
    }
  }
  return t;
}

double score_m3(const harness::SessionTranscript& transcript, Category category, const ExpectedTools& table) {
  auto it = table.find(category);
  if (it == table.end() || it->second.empty()) {
    throw ValidationError("expected_tools." + std::string(to_string(category)), "no expected tools for category");
  }
  const auto used = transcript.tools_used();
  std::vector<std::string> expected = it->second;
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
  const auto hit = std::count_if(expected.begin(), expected.end(), [&](const std::string& tool) {
    return std::find(used.begin(), used.end(), tool) != used.end();
  });
  return static_cast<double>(hit) / static_cast<double>(expected.size());
}

}  // namespace irbench::eval
