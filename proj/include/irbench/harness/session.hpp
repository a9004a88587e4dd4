// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "irbench/harness/protocol.hpp"
#include "irbench/harness/tools.hpp"
#include "irbench/scenario/ground_truth.hpp"

namespace irbench::harness {

using Clock = std::chrono::steady_clock;

struct SessionLimits {
  std::size_t max_tool_calls = 50;
  std::chrono::milliseconds timeout{120'000};
};

// Defaults overridden by IRBENCH_MAX_TOOL_CALLS and IRBENCH_TIMEOUT_S.
// Malformed values throw ValidationError.
SessionLimits limits_from_environment(SessionLimits defaults = {});

enum class ReadStatus { line, eof, timeout };

struct ReadResult {
  ReadStatus status = ReadStatus::eof;
  std::string line;
};

struct AgentExit {
  bool clean = true;       // exited normally with status 0
  std::string diagnostic;  // exit status, signal or exception text
};

// Line-oriented pipe to one agent for one case.
class Transport {
 public:
  virtual ~Transport() = default;
  // False when the agent is gone.
  virtual bool send_line(const std::string& line) = 0;
  virtual ReadResult read_line(Clock::time_point deadline) = 0;
  // Closes the agent's input and reaps it; kills it after `grace`.
  virtual AgentExit finish(std::chrono::milliseconds grace) = 0;
};

// Runs an executable with the protocol on its stdin/stdout. stderr is kept
// (last 4 KiB) for diagnostics.
class SubprocessTransport : public Transport {
 public:
  explicit SubprocessTransport(std::vector<std::string> argv);
  ~SubprocessTransport() override;
  SubprocessTransport(const SubprocessTransport&) = delete;
  SubprocessTransport& operator=(const SubprocessTransport&) = delete;

  bool send_line(const std::string& line) override;
  ReadResult read_line(Clock::time_point deadline) override;
  AgentExit finish(std::chrono::milliseconds grace) override;
  const std::string& stderr_tail() const { return stderr_tail_; }

 private:
  void drain_stderr();

  int pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  int err_fd_ = -1;
  std::string buffer_;
  std::string stderr_tail_;
  std::optional<AgentExit> exit_;
};

// Agent side of an in-process session.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const ojson& message) = 0;
  // nullopt once the harness has closed the session.
  virtual std::optional<ojson> receive() = 0;
};

using Agent = std::function<void(Channel&)>;

// Runs an Agent on its own thread. Agents must return once receive() yields
// nullopt; a timeout cannot preempt a thread that never reads.
class InProcessTransport : public Transport {
 public:
  explicit InProcessTransport(Agent agent);
  ~InProcessTransport() override;
  InProcessTransport(const InProcessTransport&) = delete;
  InProcessTransport& operator=(const InProcessTransport&) = delete;

  bool send_line(const std::string& line) override;
  ReadResult read_line(Clock::time_point deadline) override;
  AgentExit finish(std::chrono::milliseconds grace) override;

 private:
  struct Shared;
  std::shared_ptr<Shared> shared_;
  std::thread thread_;
};

struct CaseView {
  std::string case_id;
  scenario::Alert alert;
  ToolContext tools;
};

struct SessionOutcome {
  SessionTranscript transcript;
  std::optional<InvestigationReport> report;
};

ojson case_start_message(const CaseView& view, const SessionLimits& limits);

// Drives one session to completion. Never throws for agent misbehaviour;
// that ends up in transcript.status and transcript.error.
SessionOutcome run_session(Transport& transport, const CaseView& view, const SessionLimits& limits);

}  // namespace irbench::harness
