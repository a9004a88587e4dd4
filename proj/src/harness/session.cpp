// SPDX-License-Identifier: Apache-2.0
#include "irbench/harness/session.hpp"

#include <fcntl.h>
#include <poll.h>
#include <pthread.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace irbench::harness {

namespace {

constexpr std::size_t kStderrTail = 4096;

std::size_t positive_env(const char* name, std::size_t fallback) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(raw, &end, 10);
  if (errno != 0 || *end != '\0' || v <= 0) {
    throw ValidationError(name, "expected a positive integer, got '" + std::string(raw) + "'");
  }
  return static_cast<std::size_t>(v);
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  if (left <= 0) return 0;
  return left > 1'000'000 ? 1'000'000 : static_cast<int>(left);
}

AgentExit exit_from_status(int status) {
  if (WIFEXITED(status)) {
    const int code = WEXITSTATUS(status);
    return {code == 0, code == 0 ? "" : "exit status " + std::to_string(code)};
  }
  if (WIFSIGNALED(status)) return {false, "killed by signal " + std::to_string(WTERMSIG(status))};
  return {false, "unknown wait status"};
}

}  // namespace

SessionLimits limits_from_environment(SessionLimits defaults) {
  defaults.max_tool_calls = positive_env("IRBENCH_MAX_TOOL_CALLS", defaults.max_tool_calls);
  const auto secs = positive_env("IRBENCH_TIMEOUT_S", static_cast<std::size_t>(defaults.timeout.count() / 1000));
  defaults.timeout = std::chrono::milliseconds(secs * 1000);
  return defaults;
}

// ---- subprocess ----

SubprocessTransport::SubprocessTransport(std::vector<std::string> argv) {
  if (argv.empty()) throw ValidationError("agent", "empty command line");
  int in[2], out[2], err[2];
  if (pipe2(in, O_CLOEXEC) != 0 || pipe2(out, O_CLOEXEC) != 0 || pipe2(err, O_CLOEXEC) != 0) {
    throw Error(std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<char*> args;
  for (auto& a : argv) args.push_back(a.data());
  args.push_back(nullptr);
  pid_ = fork();
  if (pid_ < 0) throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(in[0], STDIN_FILENO);
    dup2(out[1], STDOUT_FILENO);
    dup2(err[1], STDERR_FILENO);
    execvp(args[0], args.data());
    const std::string msg = std::string("exec ") + args[0] + ": " + std::strerror(errno) + "\n";
    (void)!write(STDERR_FILENO, msg.data(), msg.size());
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  close(err[1]);
  in_fd_ = in[1];
  out_fd_ = out[0];
  err_fd_ = err[0];
  fcntl(err_fd_, F_SETFL, O_NONBLOCK);
}

SubprocessTransport::~SubprocessTransport() {
  if (!exit_) finish(std::chrono::milliseconds(0));
}

namespace {

// Blocks SIGPIPE on this thread so a write to a dead agent fails with EPIPE
// instead of killing the harness. A signal raised meanwhile is consumed.
class SigpipeGuard {
 public:
  SigpipeGuard() {
    sigemptyset(&set_);
    sigaddset(&set_, SIGPIPE);
    sigset_t pending;
    sigpending(&pending);
    was_pending_ = sigismember(&pending, SIGPIPE) == 1;
    pthread_sigmask(SIG_BLOCK, &set_, &old_);
  }
  ~SigpipeGuard() {
    if (!was_pending_) {
      const timespec zero{0, 0};
      while (sigtimedwait(&set_, nullptr, &zero) > 0) {
      }
    }
    pthread_sigmask(SIG_SETMASK, &old_, nullptr);
  }
  SigpipeGuard(const SigpipeGuard&) = delete;
  SigpipeGuard& operator=(const SigpipeGuard&) = delete;

 private:
  sigset_t set_, old_;
  bool was_pending_ = false;
};

}  // namespace

bool SubprocessTransport::send_line(const std::string& line) {
  if (in_fd_ < 0) return false;
  SigpipeGuard guard;
  std::string data = line + "\n";
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = write(in_fd_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;  // EPIPE: agent closed its input
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

void SubprocessTransport::drain_stderr() {
  if (err_fd_ < 0) return;
  char buf[4096];
  for (;;) {
    const ssize_t n = read(err_fd_, buf, sizeof buf);
    if (n > 0) {
      stderr_tail_.append(buf, static_cast<std::size_t>(n));
      if (stderr_tail_.size() > kStderrTail) stderr_tail_.erase(0, stderr_tail_.size() - kStderrTail);
      continue;
    }
    if (n == 0) {
      close(err_fd_);
      err_fd_ = -1;
    }
    return;
  }
}

ReadResult SubprocessTransport::read_line(Clock::time_point deadline) {
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      ReadResult r{ReadStatus::line, buffer_.substr(0, nl)};
      buffer_.erase(0, nl + 1);
      return r;
    }
    if (out_fd_ < 0) {
      if (!buffer_.empty()) {
        ReadResult r{ReadStatus::line, std::move(buffer_)};
        buffer_.clear();
        return r;
      }
      return {ReadStatus::eof, ""};
    }
    pollfd fds[2] = {{out_fd_, POLLIN, 0}, {err_fd_, POLLIN, 0}};
    const int n = poll(fds, err_fd_ >= 0 ? 2 : 1, remaining_ms(deadline));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("poll: ") + std::strerror(errno));
    }
    if (n == 0) return {ReadStatus::timeout, ""};
    if (err_fd_ >= 0 && fds[1].revents) drain_stderr();
    if (fds[0].revents) {
      char buf[65536];
      const ssize_t got = read(out_fd_, buf, sizeof buf);
      if (got > 0) {
        buffer_.append(buf, static_cast<std::size_t>(got));
      } else if (got == 0 || errno != EINTR) {
        close(out_fd_);
        out_fd_ = -1;
      }
    }
  }
}

AgentExit SubprocessTransport::finish(std::chrono::milliseconds grace) {
  if (exit_) return *exit_;
  if (in_fd_ >= 0) {
    close(in_fd_);
    in_fd_ = -1;
  }
  const auto deadline = Clock::now() + grace;
  int status = 0;
  bool reaped = false;
  for (;;) {
    const pid_t r = waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      reaped = true;
      break;
    }
    if (r < 0 && errno != EINTR) break;
    if (Clock::now() >= deadline) break;
    drain_stderr();
    usleep(2000);
  }
  if (!reaped) {
    kill(pid_, SIGKILL);
    while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
  drain_stderr();
  for (int* fd : {&out_fd_, &err_fd_}) {
    if (*fd >= 0) close(*fd);
    *fd = -1;
  }
  AgentExit e = exit_from_status(status);
  if (!reaped) e = {false, "killed after grace period"};
  exit_ = e;
  return e;
}

// ---- in-process ----

struct InProcessTransport::Shared {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::string> to_agent;
  std::deque<std::string> from_agent;
  bool harness_closed = false;
  bool agent_done = false;
  std::optional<std::string> failure;
};

namespace {

class QueueChannel : public Channel {
 public:
  explicit QueueChannel(std::shared_ptr<void> shared, std::function<void(std::string)> push,
                        std::function<std::optional<std::string>()> pop)
      : shared_(std::move(shared)), push_(std::move(push)), pop_(std::move(pop)) {}
  void send(const ojson& message) override { push_(message.dump()); }
  std::optional<ojson> receive() override {
    auto line = pop_();
    if (!line) return std::nullopt;
    return ojson::parse(*line);
  }

 private:
  std::shared_ptr<void> shared_;
  std::function<void(std::string)> push_;
  std::function<std::optional<std::string>()> pop_;
};

}  // namespace

InProcessTransport::InProcessTransport(Agent agent) : shared_(std::make_shared<Shared>()) {
  thread_ = std::thread([s = shared_, agent = std::move(agent)] {
    QueueChannel ch(
        s,
        [s](std::string line) {
          std::lock_guard lock(s->mu);
          s->from_agent.push_back(std::move(line));
          s->cv.notify_all();
        },
        [s]() -> std::optional<std::string> {
          std::unique_lock lock(s->mu);
          s->cv.wait(lock, [&] { return !s->to_agent.empty() || s->harness_closed; });
          if (s->to_agent.empty()) return std::nullopt;
          std::string line = std::move(s->to_agent.front());
          s->to_agent.pop_front();
          return line;
        });
    std::optional<std::string> failure;
    try {
      agent(ch);
    } catch (const std::exception& e) {
      failure = std::string("agent threw: ") + e.what();
    } catch (...) {
      failure = "agent threw a non-standard exception";
    }
    std::lock_guard lock(s->mu);
    s->failure = failure;
    s->agent_done = true;
    s->cv.notify_all();
  });
}

InProcessTransport::~InProcessTransport() { finish(std::chrono::milliseconds(0)); }

bool InProcessTransport::send_line(const std::string& line) {
  std::lock_guard lock(shared_->mu);
  if (shared_->agent_done || shared_->harness_closed) return false;
  shared_->to_agent.push_back(line);
  shared_->cv.notify_all();
  return true;
}

ReadResult InProcessTransport::read_line(Clock::time_point deadline) {
  std::unique_lock lock(shared_->mu);
  const bool ready = shared_->cv.wait_until(lock, deadline, [&] {
    return !shared_->from_agent.empty() || shared_->agent_done;
  });
  if (!shared_->from_agent.empty()) {
    ReadResult r{ReadStatus::line, std::move(shared_->from_agent.front())};
    shared_->from_agent.pop_front();
    return r;
  }
  if (!ready) return {ReadStatus::timeout, ""};
  return {ReadStatus::eof, ""};
}

AgentExit InProcessTransport::finish(std::chrono::milliseconds) {
  {
    std::lock_guard lock(shared_->mu);
    shared_->harness_closed = true;
    shared_->cv.notify_all();
  }
  if (thread_.joinable()) thread_.join();
  std::lock_guard lock(shared_->mu);
  if (shared_->failure) return {false, *shared_->failure};
  return {true, ""};
}

// ---- session ----

ojson case_start_message(const CaseView& view, const SessionLimits& limits) {
  return {{"type", "case_start"},
          {"case_id", view.case_id},
          {"alert", scenario::alert_to_json(view.alert)},
          {"tools", catalog_to_json()},
          {"limits",
           {{"max_tool_calls", limits.max_tool_calls},
            {"timeout_ms", static_cast<std::int64_t>(limits.timeout.count())}}}};
}

SessionOutcome run_session(Transport& transport, const CaseView& view, const SessionLimits& limits) {
  SessionOutcome out;
  SessionTranscript& t = out.transcript;
  t.case_id = view.case_id;
  const auto started = Clock::now();
  const auto deadline = started + limits.timeout;
  const auto fail = [&](SessionStatus status, std::string why) {
    t.status = status;
    t.error = std::move(why);
  };

  bool ended = false;
  if (!transport.send_line(case_start_message(view, limits).dump())) {
    fail(SessionStatus::error, "agent did not accept case_start");
    ended = true;
  }
  while (!ended) {
    const ReadResult r = transport.read_line(deadline);
    if (r.status == ReadStatus::timeout) {
      fail(SessionStatus::timeout, "no final report within " + std::to_string(limits.timeout.count()) + " ms");
      break;
    }
    if (r.status == ReadStatus::eof) {
      fail(SessionStatus::no_report, "agent closed its output without a final report");
      break;
    }
    if (r.line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ojson msg;
    try {
      msg = ojson::parse(r.line);
    } catch (const ojson::parse_error& e) {
      fail(SessionStatus::error, std::string("malformed message: ") + e.what());
      break;
    }
    const std::string type = msg.is_object() ? string_or(msg, "type", "") : "";
    try {
      if (type == "tool_call") {
        ToolCall call = tool_call_from_json(msg);
        if (t.entries.size() >= limits.max_tool_calls) {
          fail(SessionStatus::call_limit,
               "tool call limit of " + std::to_string(limits.max_tool_calls) + " exceeded");
          break;
        }
        ToolResult result = answer_tool_call(view.tools, call);
        transport.send_line(tool_result_to_json(result).dump());
        t.entries.push_back({std::move(call), std::move(result)});
      } else if (type == "final_report") {
        InvestigationReport report = report_from_json(field(msg, "report"));
        if (report.case_id.empty()) report.case_id = view.case_id;
        if (report.case_id != view.case_id) {
          fail(SessionStatus::error, "report is for case '" + report.case_id + "'");
          break;
        }
        out.report = std::move(report);
        t.status = SessionStatus::completed;
        ended = true;
      } else {
        fail(SessionStatus::error, "unexpected message type '" + type + "'");
        break;
      }
    } catch (const Error& e) {
      fail(SessionStatus::error, std::string("protocol violation: ") + e.what());
      break;
    }
  }

  const AgentExit exit = transport.finish(std::chrono::milliseconds(2000));
  // A crash after an otherwise silent session is an error, not a missing report.
  if (!exit.clean && (t.status == SessionStatus::no_report)) {
    fail(SessionStatus::error, "agent crashed: " + exit.diagnostic);
  }
  if (auto* sp = dynamic_cast<SubprocessTransport*>(&transport);
      sp && t.status == SessionStatus::error && !sp->stderr_tail().empty()) {
    *t.error += "\nstderr: " + sp->stderr_tail();
  }
  t.call_count = t.entries.size();
  t.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
  return out;
}

}  // namespace irbench::harness
