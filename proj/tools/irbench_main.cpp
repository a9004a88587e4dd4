// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "CLI11.hpp"
#include "irbench/cli/pipeline.hpp"
#include "irbench/harness/agents.hpp"

namespace fs = std::filesystem;
using namespace irbench;

namespace {

int run_generate(const cli::GenerateOptions& o) {
  const auto r = cli::cmd_generate(o);
  std::cerr << "generated " << r.cases << " cases under " << (o.out / cli::kCasesDir).string() << " ("
            << r.rejected << " rejected variations)\n";
  return 0;
}

int run_agent(const cli::RunOptions& o) {
  const auto r = cli::cmd_run(o);
  for (const auto& f : r.failures) {
    std::string first_line = f.error.substr(0, f.error.find('\n'));
    std::cerr << "warning: " << f.case_id << ": " << f.status << (first_line.empty() ? "" : ": " + first_line) << "\n";
  }
  std::cerr << "ran " << r.cases << " cases: " << r.reports << " reports, " << r.failures.size()
            << " sessions ended without completing\n";
  return 0;
}

int run_evaluate(const cli::EvaluateOptions& o) {
  const auto r = cli::cmd_evaluate(o);
  if (!r.missing_reports.empty()) {
    std::cerr << "warning: " << r.missing_reports.size() << " cases have no report or transcript; scored as no-report:";
    for (const auto& id : r.missing_reports) std::cerr << ' ' << id;
    std::cerr << "\n";
  }
  std::cout << eval::render_markdown(r.summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incident-response agent benchmark: generate cases, run agents, score reports"};
  app.require_subcommand(1);

  cli::GenerateOptions gen;
  std::string gen_config, gen_extra;
  auto* generate = app.add_subcommand("generate", "Generate a benchmark corpus");
  generate->add_option("--config", gen_config, "Distribution config (JSON)")->check(CLI::ExistingFile);
  generate->add_option("--seed", gen.seed, "Master seed")->default_val(0);
  generate->add_option("--out", gen.out, "Output root")->required();
  generate->add_option("--jobs", gen.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
  generate->add_option("--extra-specs", gen_extra, "Additional scenario specs, one JSON per line")
      ->check(CLI::ExistingFile);

  cli::RunOptions run;
  std::string agent_line;
  std::optional<std::size_t> max_calls;
  std::optional<std::size_t> timeout_s;
  auto* run_cmd = app.add_subcommand("run", "Run an agent over every case of a corpus");
  run_cmd->add_option("--corpus", run.corpus, "Corpus root")->required()->check(CLI::ExistingDirectory);
  auto* agent_opt = run_cmd->add_option("--agent", agent_line, "Agent command line (protocol on stdin/stdout)");
  run_cmd->add_option("--reference", run.reference, "Built-in agent run in-process")
      ->check(CLI::IsMember(harness::reference_agent_names()))
      ->excludes(agent_opt);
  run_cmd->add_option("--agent-seed", run.agent_seed, "Seed for the random reference agent");
  run_cmd->add_option("--out", run.out, "Output root (default: the corpus root)");
  run_cmd->add_option("--jobs", run.jobs, "Concurrent sessions")->default_val(1)->check(CLI::PositiveNumber);
  run_cmd->add_option("--max-cases", run.max_cases, "Run only the first N cases");
  run_cmd->add_option("--max-tool-calls", max_calls, "Tool calls per session (env IRBENCH_MAX_TOOL_CALLS)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--timeout", timeout_s, "Seconds per session (env IRBENCH_TIMEOUT_S)")
      ->check(CLI::PositiveNumber);

  cli::EvaluateOptions ev;
  std::string reports_dir, tools_file;
  bool validated = false;
  std::vector<std::size_t> thresholds = {3, 5, 7};
  auto* evaluate = app.add_subcommand("evaluate", "Score reports against ground truth");
  evaluate->add_option("--corpus", ev.corpus, "Corpus root")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--reports", reports_dir, "Reports directory (default: <out>/reports)");
  evaluate->add_option("--out", ev.out, "Output root (default: the corpus root)");
  evaluate->add_option("--beta", ev.eval.beta, "F-beta weight")->default_val(3.0)->check(CLI::PositiveNumber);
  evaluate->add_option("--tau", ev.eval.tau, "ROUGE-L match threshold")->default_val(0.42)->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--k-min", ev.eval.k_min, "Qualifying claims needed to uphold a TP verdict")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  evaluate->add_flag("--validated", validated, "Apply evidence validation before triage scoring");
  evaluate->add_option("--thresholds", thresholds, "N values of the novel-finding curve")->delimiter(',');
  evaluate->add_option("--expected-tools", tools_file, "Expected-tool table (JSON)")->check(CLI::ExistingFile);

  std::string report_root, report_format = "md";
  auto* report = app.add_subcommand("report", "Print a stored summary");
  report->add_option("--out", report_root, "Output root holding summary/summary.json")->required();
  report->add_option("--format", report_format, "md, csv or json")->check(CLI::IsMember({"md", "csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      if (!gen_config.empty()) gen.config = gen_config;
      if (!gen_extra.empty()) gen.extra_specs = gen_extra;
      return run_generate(gen);
    }
    if (*run_cmd) {
      if (!agent_line.empty()) run.agent_command = cli::split_command(agent_line);
      if (run.out.empty()) run.out = run.corpus;
      run.limits = harness::limits_from_environment();
      if (max_calls) run.limits.max_tool_calls = *max_calls;
      if (timeout_s) run.limits.timeout = std::chrono::seconds(*timeout_s);
      return run_agent(run);
    }
    if (*evaluate) {
      if (ev.out.empty()) ev.out = ev.corpus;
      ev.reports = reports_dir.empty() ? ev.out / cli::kReportsDir : fs::path(reports_dir);
      ev.mode = validated ? eval::ValidationMode::validated : eval::ValidationMode::raw;
      ev.eval.thresholds = thresholds;
      if (!tools_file.empty()) ev.eval.expected_tools = eval::expected_tools_from_json(parse_document(read_file(tools_file)));
      return run_evaluate(ev);
    }
    if (*report) {
      const fs::path path = fs::path(report_root) / cli::kSummaryDir / "summary.json";
      const auto summary = eval::summary_from_json(parse_document(read_file(path), path.string()));
      if (report_format == "json") {
        std::cout << dump_document(eval::summary_to_json(summary));
      } else if (report_format == "csv") {
        std::cout << eval::render_csv(summary);
      } else {
        std::cout << eval::render_markdown(summary);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "irbench: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
