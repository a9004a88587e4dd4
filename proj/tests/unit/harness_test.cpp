// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <set>
#include <thread>

#include "irbench/harness/agents.hpp"
#include "irbench/harness/session.hpp"
#include "irbench/harness/tools.hpp"
#include "irbench/scenario/execute.hpp"
#include "irbench/scenario/seeds.hpp"
#include "irbench/telemetry/jsonl.hpp"
#include "irbench/telemetry/query.hpp"

using namespace irbench;
using namespace irbench::harness;
using namespace std::chrono_literals;

namespace {

const std::vector<scenario::CaseBundle>& bundles() {
  static const std::vector<scenario::CaseBundle> all = [] {
    std::vector<scenario::CaseBundle> out;
    int i = 0;
    for (const auto& s : scenario::seed_library()) {
      out.push_back(scenario::execute_scenario(s, 17, "case-" + std::to_string(i++)).bundle);
    }
    return out;
  }();
  return all;
}

CaseView view_of(const scenario::CaseBundle& b) {
  return {b.manifest.case_id, b.alert, ToolContext{b.environment, b.log}};
}

ToolResult ask(const scenario::CaseBundle& b, const std::string& tool, ojson params = ojson::object()) {
  return answer_tool_call(ToolContext{b.environment, b.log}, {"c1", tool, std::move(params)});
}

SessionOutcome run_in_process(Agent agent, const scenario::CaseBundle& b, SessionLimits limits = {}) {
  InProcessTransport t(std::move(agent));
  return run_session(t, view_of(b), limits);
}

// Agent that calls the given tools once each and then reports FP.
Agent scripted(std::vector<std::pair<std::string, ojson>> calls) {
  return [calls](Channel& ch) {
    AgentClient client(ch);
    const auto start = client.start();
    if (!start) return;
    for (const auto& [tool, params] : calls) client.call(tool, params);
    InvestigationReport r;
    r.case_id = (*start)["case_id"].get<std::string>();
    client.report(r);
  };
}

}  // namespace

TEST(Catalog, NamesAreUniqueAndParametersTyped) {
  std::set<std::string> names;
  for (const auto& t : tool_catalog()) {
    EXPECT_TRUE(names.insert(t.name).second) << t.name;
    for (const auto& p : t.parameters) {
      EXPECT_TRUE(p.type == "string" || p.type == "integer" || p.type == "timestamp" || p.type == "date") << p.type;
    }
    EXPECT_EQ(find_tool(t.name), &t);
  }
  EXPECT_EQ(find_tool("foo"), nullptr);
  EXPECT_EQ(catalog_to_json().size(), tool_catalog().size());
}

TEST(Tools, UnknownToolIsAnErrorResult) {
  const ToolResult r = ask(bundles()[0], "foo");
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.error.find("foo"), std::string::npos);
}

TEST(Tools, BadParametersCarryASchemaHint) {
  const auto& b = bundles()[0];
  for (const ojson& params : {ojson{{"max_results", "ten"}}, ojson{{"start_time", "yesterday"}}, ojson{{"colour", "red"}}}) {
    const ToolResult r = ask(b, "lookup_events", params);
    EXPECT_FALSE(r.ok) << params.dump();
    EXPECT_NE(r.error.find("expected parameters:"), std::string::npos) << r.error;
  }
  const ToolResult missing = ask(b, "get_bucket_policy");
  EXPECT_FALSE(missing.ok);
  EXPECT_NE(missing.error.find("bucket_name (string, required)"), std::string::npos) << missing.error;
}

TEST(Tools, LookupEventsMatchesDirectQuery) {
  for (const auto& b : bundles()) {
    const auto& events = b.log.events();
    ASSERT_GT(events.size(), 4u);
    const auto& pivot = events[events.size() / 2];
    telemetry::EventQuery q = telemetry::whole_log_query(b.log);
    q.start = events[events.size() / 4].event_time;
    q.event_name = pivot.event_name;
    q.max_results = 3;
    ojson params{{"start_time", format_rfc3339(q.start)}, {"event_name", pivot.event_name}, {"max_results", 3}};
    // Follow pages on both sides.
    for (int page = 0; page < 50; ++page) {
      const auto direct = telemetry::lookup_events(b.log, q);
      const ToolResult r = ask(b, "lookup_events", params);
      ASSERT_TRUE(r.ok) << r.error;
      ASSERT_EQ(r.payload["events"].size(), direct.events.size());
      for (std::size_t i = 0; i < direct.events.size(); ++i) {
        EXPECT_EQ(r.payload["events"][i], telemetry::event_to_json(direct.events[i]));
      }
      if (!direct.next_page_token) {
        EXPECT_TRUE(r.payload["next_page_token"].is_null());
        break;
      }
      ASSERT_EQ(r.payload["next_page_token"], *direct.next_page_token);
      q.page_token = direct.next_page_token;
      params["page_token"] = *direct.next_page_token;
    }
  }
}

TEST(Tools, ListBucketsReportsPublicFlag) {
  for (const auto& b : bundles()) {
    const ToolResult r = ask(b, "list_buckets");
    ASSERT_TRUE(r.ok);
    std::string prev;
    for (const auto& bucket : r.payload["buckets"]) {
      const std::string name = bucket["name"].get<std::string>();
      EXPECT_LT(prev, name);
      prev = name;
      const ToolResult pol = ask(b, "get_bucket_policy", {{"bucket_name", name}});
      ASSERT_TRUE(pol.ok) << pol.error;
      EXPECT_EQ(pol.payload["public"], bucket["public"]);
    }
  }
}

TEST(Tools, AreDeterministic) {
  const auto& b = bundles()[3];
  for (const auto& t : tool_catalog()) {
    bool needs_args = false;
    for (const auto& p : t.parameters) needs_args = needs_args || p.required;
    if (needs_args) continue;
    EXPECT_EQ(tool_result_to_json(ask(b, t.name)), tool_result_to_json(ask(b, t.name))) << t.name;
  }
}

TEST(Tools, NeverLeakGroundTruth) {
  for (const auto& b : bundles()) {
    const auto outcome = run_in_process(oracle_agent([&](const std::string&) { return b.ground_truth; }), b);
    ASSERT_EQ(outcome.transcript.status, SessionStatus::completed);
    std::string seen = case_start_message(view_of(b), {}).dump();
    for (const auto& e : outcome.transcript.entries) seen += e.result.payload.dump();
    EXPECT_EQ(seen.find("ground_truth"), std::string::npos);
    for (const auto& f : b.ground_truth.findings) {
      // Non-novel findings restate the alert, which the agent is given.
      if (f.novel) {
        EXPECT_EQ(seen.find(f.statement), std::string::npos) << f.statement;
      }
      EXPECT_EQ(seen.find(f.finding_id), std::string::npos) << f.finding_id;
    }
  }
}

TEST(Session, TranscriptReplaysExactly) {
  for (const auto& b : bundles()) {
    const auto outcome = run_in_process(keyword_agent(), b);
    ASSERT_TRUE(outcome.report.has_value());
    for (const auto& e : outcome.transcript.entries) {
      const ToolResult again = answer_tool_call(ToolContext{b.environment, b.log}, e.call);
      EXPECT_EQ(tool_result_to_json(again), tool_result_to_json(e.result));
    }
    EXPECT_EQ(outcome.transcript.call_count, outcome.transcript.entries.size());
  }
}

TEST(Session, UnknownToolDoesNotEndTheSession) {
  const auto outcome = run_in_process(scripted({{"foo", ojson::object()}, {"list_users", ojson::object()}}), bundles()[0]);
  EXPECT_EQ(outcome.transcript.status, SessionStatus::completed);
  ASSERT_EQ(outcome.transcript.entries.size(), 2u);
  EXPECT_FALSE(outcome.transcript.entries[0].result.ok);
  EXPECT_TRUE(outcome.transcript.entries[1].result.ok);
}

TEST(Session, ParrotMakesNoCalls) {
  const auto& b = bundles()[1];
  const auto outcome = run_in_process(parrot_agent(), b);
  EXPECT_EQ(outcome.transcript.call_count, 0u);
  ASSERT_TRUE(outcome.report.has_value());
  EXPECT_EQ(outcome.report->verdict, Verdict::TP);
  EXPECT_EQ(outcome.report->case_id, b.manifest.case_id);
}

TEST(Session, CallLimitStopsAtTheBudget) {
  SessionLimits limits;
  limits.max_tool_calls = 5;
  const auto outcome = run_in_process(loop_agent(), bundles()[0], limits);
  EXPECT_EQ(outcome.transcript.status, SessionStatus::call_limit);
  EXPECT_EQ(outcome.transcript.entries.size(), 5u);
  EXPECT_FALSE(outcome.report.has_value());
}

TEST(Session, CrashAndSilence) {
  const auto crashed = run_in_process(crash_agent(), bundles()[0]);
  EXPECT_EQ(crashed.transcript.status, SessionStatus::error);
  EXPECT_TRUE(crashed.transcript.error.has_value());
  const auto silent = run_in_process(silent_agent(), bundles()[0]);
  EXPECT_EQ(silent.transcript.status, SessionStatus::no_report);
  EXPECT_FALSE(silent.report.has_value());
}

TEST(Session, WrongCaseIdIsAnError) {
  Agent liar = [](Channel& ch) {
    AgentClient client(ch);
    client.start();
    InvestigationReport r;
    r.case_id = "someone-else";
    client.report(r);
  };
  const auto outcome = run_in_process(liar, bundles()[0]);
  EXPECT_EQ(outcome.transcript.status, SessionStatus::error);
  EXPECT_FALSE(outcome.report.has_value());
}

TEST(Subprocess, ReferenceAgentsOverPipes) {
  const auto& b = bundles()[2];
  {
    SubprocessTransport t({IRBENCH_AGENT_BIN, "keyword"});
    const auto outcome = run_session(t, view_of(b), {});
    EXPECT_EQ(outcome.transcript.status, SessionStatus::completed);
    const auto in_process = run_in_process(keyword_agent(), b);
    EXPECT_EQ(outcome.report, in_process.report);
  }
  {
    SubprocessTransport t({IRBENCH_AGENT_BIN, "crash"});
    const auto outcome = run_session(t, view_of(b), {});
    EXPECT_EQ(outcome.transcript.status, SessionStatus::error);
    ASSERT_TRUE(outcome.transcript.error.has_value());
  }
}

TEST(Subprocess, TimeoutKillsTheAgent) {
  SubprocessTransport t({"/bin/sleep", "30"});
  SessionLimits limits;
  limits.timeout = 300ms;
  const auto begin = Clock::now();
  const auto outcome = run_session(t, view_of(bundles()[0]), limits);
  EXPECT_EQ(outcome.transcript.status, SessionStatus::timeout);
  EXPECT_LT(Clock::now() - begin, 10s);
}

TEST(Subprocess, MalformedOutputIsAnError) {
  SubprocessTransport t({"/bin/sh", "-c", "read line; echo 'not json'; cat >/dev/null"});
  const auto outcome = run_session(t, view_of(bundles()[0]), {});
  EXPECT_EQ(outcome.transcript.status, SessionStatus::error);
}

TEST(Subprocess, MissingBinaryIsAnError) {
  SubprocessTransport t({"/nonexistent/agent"});
  const auto outcome = run_session(t, view_of(bundles()[0]), {});
  EXPECT_EQ(outcome.transcript.status, SessionStatus::error);
}

TEST(Protocol, MessagesRoundTrip) {
  const auto& b = bundles()[0];
  const auto outcome = run_in_process(oracle_agent([&](const std::string&) { return b.ground_truth; }), b);
  ASSERT_TRUE(outcome.report.has_value());
  EXPECT_EQ(report_from_json(report_to_json(*outcome.report)), *outcome.report);
  const ojson t = transcript_to_json(outcome.transcript);
  EXPECT_EQ(transcript_to_json(transcript_from_json(t)), t);
  for (const auto& e : outcome.transcript.entries) {
    EXPECT_EQ(tool_call_to_json(tool_call_from_json(tool_call_to_json(e.call))), tool_call_to_json(e.call));
    EXPECT_EQ(tool_result_to_json(tool_result_from_json(tool_result_to_json(e.result))), tool_result_to_json(e.result));
  }
  for (auto s : {SessionStatus::completed, SessionStatus::call_limit, SessionStatus::timeout, SessionStatus::no_report,
                 SessionStatus::error}) {
    EXPECT_EQ(session_status_from_string(to_string(s)), s);
  }
  EXPECT_THROW(report_from_json(ojson{{"case_id", "x"}, {"verdict", "maybe"}, {"claims", ojson::array()}}), Error);
}

TEST(Limits, EnvironmentOverridesDefaults) {
  ::setenv("IRBENCH_MAX_TOOL_CALLS", "7", 1);
  ::setenv("IRBENCH_TIMEOUT_S", "3", 1);
  const SessionLimits l = limits_from_environment();
  EXPECT_EQ(l.max_tool_calls, 7u);
  EXPECT_EQ(l.timeout, 3000ms);
  ::setenv("IRBENCH_MAX_TOOL_CALLS", "zero", 1);
  EXPECT_THROW(limits_from_environment(), ValidationError);
  ::setenv("IRBENCH_MAX_TOOL_CALLS", "0", 1);
  EXPECT_THROW(limits_from_environment(), ValidationError);
  ::unsetenv("IRBENCH_MAX_TOOL_CALLS");
  ::unsetenv("IRBENCH_TIMEOUT_S");
  const SessionLimits d = limits_from_environment();
  EXPECT_EQ(d.max_tool_calls, 50u);
  EXPECT_EQ(d.timeout, 120000ms);
}

TEST(ExpectedTools, EveryCategoryStartsWithLookupAndEndsWithCost) {
  for (Category c : kAllCategories) {
    const auto tools = default_expected_tools(c);
    ASSERT_GE(tools.size(), 3u);
    EXPECT_EQ(tools.front(), "lookup_events");
    EXPECT_EQ(tools.back(), "get_cost_and_usage");
    for (const auto& t : tools) EXPECT_NE(find_tool(t), nullptr) << t;
  }
}

TEST(Subprocess, WritingToAnExitedAgentFailsQuietly) {
  SubprocessTransport t({"/bin/true"});
  std::this_thread::sleep_for(200ms);
  bool ok = true;
  for (int i = 0; i < 3 && ok; ++i) ok = t.send_line(std::string(1 << 16, 'x'));
  EXPECT_FALSE(ok);
  EXPECT_TRUE(t.finish(0ms).clean);
}
