// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irbench/harness/session.hpp"
#include "irbench/scenario/ground_truth.hpp"

namespace irbench::harness {

// Tools every category is expected to exercise, plus the category-specific
// reads. The evaluator uses this as its default table.
std::vector<std::string> default_expected_tools(Category c);

// Agent-side convenience over a Channel.
class AgentClient {
 public:
  explicit AgentClient(Channel& ch) : ch_(ch) {}

  // Waits for case_start. nullopt when the session is already closed.
  std::optional<ojson> start();
  // Issues one call and waits for its result. Throws SessionClosed when the
  // harness ends the session.
  ToolResult call(const std::string& tool, ojson parameters = ojson::object());
  void report(const InvestigationReport& r);

  struct SessionClosed {};

 private:
  Channel& ch_;
  int next_id_ = 1;
};

// Channel over a pair of streams; what a stand-alone agent process uses.
class StreamChannel : public Channel {
 public:
  StreamChannel(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  void send(const ojson& message) override;
  std::optional<ojson> receive() override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

using GroundTruthSource = std::function<std::optional<scenario::GroundTruth>(const std::string& case_id)>;

// Reads the ground truth out-of-band and reports it verbatim.
Agent oracle_agent(GroundTruthSource truth);
// Verdict TP with the alert description as its only claim; no tool calls.
Agent parrot_agent();
// Random tool calls and a coin-flip verdict; seeded by case id.
Agent random_agent(std::uint64_t seed);
// Deterministic keyword rules over the log and the environment.
Agent keyword_agent();
// Calls list_users until the harness stops answering.
Agent loop_agent();
// Throws right after case_start.
Agent crash_agent();
// Returns without reporting.
Agent silent_agent();

const std::vector<std::string>& reference_agent_names();
// `corpus` is needed only by the oracle (ground truth lives there).
Agent make_reference_agent(const std::string& name, const std::string& corpus, std::uint64_t seed);

}  // namespace irbench::harness
