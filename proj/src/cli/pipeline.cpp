// SPDX-License-Identifier: Apache-2.0
#include "irbench/cli/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include "irbench/harness/agents.hpp"
#include "irbench/scenario/bundle.hpp"
#include "irbench/scenario/seeds.hpp"
#include "irbench/variation/benchmark.hpp"

namespace irbench::cli {

namespace {

template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  const std::size_t workers = std::clamp<std::size_t>(jobs < 1 ? 1 : static_cast<std::size_t>(jobs), 1, n ? n : 1);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  if (workers == 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

void clear_previous_corpus(const fs::path& out) {
  const fs::path cases = out / kCasesDir;
  if (!fs::exists(cases)) return;
  if (!fs::exists(out / kCorpusManifest) && !fs::is_empty(cases)) {
    throw ValidationError("out", cases.string() + " is not empty and has no corpus manifest; refusing to overwrite");
  }
  fs::remove_all(cases);
}

ojson corpus_manifest(const variation::DistributionConfig& config, std::uint64_t seed,
                      const variation::Benchmark& bench) {
  ojson cases = ojson::array();
  for (const auto& b : bench.cases) {
    const auto& m = b.manifest;
    cases.push_back({{"case_id", m.case_id},
                     {"scenario_id", m.scenario_id},
                     {"category", std::string(to_string(m.category))},
                     {"verdict", std::string(to_string(b.ground_truth.verdict))},
                     {"seed", m.seed},
                     {"lineage", m.lineage}});
  }
  ojson rejected = ojson::array();
  for (const auto& r : bench.rejected) {
    rejected.push_back({{"case_id", r.case_id},
                        {"attempt", r.attempt},
                        {"lineage", r.lineage},
                        {"reason", std::string(variation::to_string(r.rejection.reason))},
                        {"detail", r.rejection.detail}});
  }
  return {{"seed", seed}, {"config", variation::config_to_json(config)}, {"cases", cases}, {"rejected", rejected}};
}

std::optional<ojson> read_optional_json(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  return parse_document(read_file(path), path.string());
}

}  // namespace

GenerateResult cmd_generate(const GenerateOptions& options) {
  variation::DistributionConfig config = variation::default_config();
  if (options.config) config = variation::config_from_json(parse_document(read_file(*options.config), options.config->string()));
  std::vector<scenario::ScenarioSpec> seeds = scenario::seed_library();
  if (options.extra_specs) {
    std::ifstream in(*options.extra_specs);
    if (!in) throw ValidationError("extra_specs", "cannot open " + options.extra_specs->string());
    for (auto& s : variation::read_spec_stream(in)) seeds.push_back(std::move(s));
  }
  const variation::Benchmark bench = variation::build_benchmark(config, seeds, options.seed, options.jobs);

  fs::create_directories(options.out);
  clear_previous_corpus(options.out);
  parallel_for(bench.cases.size(), options.jobs, [&](std::size_t i) {
    const auto& b = bench.cases[i];
    scenario::write_bundle(b, options.out / kCasesDir / b.manifest.case_id);
  });
  write_file_atomic(options.out / kCorpusManifest, dump_document(corpus_manifest(config, options.seed, bench)));
  return {bench.cases.size(), bench.rejected.size()};
}

std::vector<std::string> corpus_case_ids(const fs::path& corpus) {
  std::vector<std::string> ids;
  if (auto manifest = read_optional_json(corpus / kCorpusManifest)) {
    for (const auto& c : get_array(*manifest, "cases")) ids.push_back(get_string(c, "case_id"));
  } else if (fs::is_directory(corpus / kCasesDir)) {
    for (const auto& entry : fs::directory_iterator(corpus / kCasesDir)) {
      if (entry.is_directory()) ids.push_back(entry.path().filename().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

RunResult cmd_run(const RunOptions& options) {
  if (options.agent_command.empty() == !options.reference) {
    throw ValidationError("agent", "give exactly one of an agent command or a reference agent");
  }
  if (options.limits.max_tool_calls == 0 || options.limits.timeout.count() <= 0) {
    throw ValidationError("limits", "limits must be positive");
  }
  std::vector<std::string> ids = corpus_case_ids(options.corpus);
  if (options.max_cases && ids.size() > options.max_cases) ids.resize(options.max_cases);
  if (ids.empty()) throw ValidationError("corpus", "no cases under " + (options.corpus / kCasesDir).string());

  struct Outcome {
    bool report = false;
    std::optional<CaseFailure> failure;
  };
  std::vector<Outcome> outcomes(ids.size());
  parallel_for(ids.size(), options.jobs, [&](std::size_t i) {
    const std::string& id = ids[i];
    Outcome& o = outcomes[i];
    try {
      // Ground truth is deliberately not loaded.
      const scenario::CaseBundle bundle = scenario::read_bundle(options.corpus / kCasesDir / id, false);
      const harness::CaseView view{id, bundle.alert, {bundle.environment, bundle.log}};
      harness::SessionOutcome session;
      if (options.reference) {
        harness::InProcessTransport t(
            harness::make_reference_agent(*options.reference, options.corpus.string(), options.agent_seed));
        session = harness::run_session(t, view, options.limits);
      } else {
        harness::SubprocessTransport t(options.agent_command);
        session = harness::run_session(t, view, options.limits);
      }
      const fs::path dir = options.out / kReportsDir / id;
      fs::create_directories(dir);
      if (session.report) {
        write_file_atomic(dir / kReportFile, dump_document(harness::report_to_json(*session.report)));
        o.report = true;
      } else {
        fs::remove(dir / kReportFile);
      }
      write_file_atomic(dir / kTranscriptFile, dump_document(harness::transcript_to_json(session.transcript)));
      if (session.transcript.status != harness::SessionStatus::completed) {
        o.failure = CaseFailure{id, std::string(harness::to_string(session.transcript.status)),
                                session.transcript.error.value_or("")};
      }
    } catch (const std::exception& e) {
      o.failure = CaseFailure{id, "harness_error", e.what()};
    }
  });

  RunResult r;
  r.cases = ids.size();
  for (auto& o : outcomes) {
    if (o.report) r.reports += 1;
    if (o.failure) r.failures.push_back(std::move(*o.failure));
  }
  return r;
}

EvaluateResult cmd_evaluate(const EvaluateOptions& options) {
  const std::vector<std::string> ids = corpus_case_ids(options.corpus);
  if (ids.empty()) throw ValidationError("corpus", "no cases under " + (options.corpus / kCasesDir).string());
  EvaluateResult r;
  for (const auto& id : ids) {
    const scenario::CaseBundle bundle = scenario::read_bundle(options.corpus / kCasesDir / id, true);
    const fs::path dir = options.reports / id;
    std::optional<harness::InvestigationReport> report;
    std::optional<harness::SessionTranscript> transcript;
    if (auto j = read_optional_json(dir / kReportFile)) report = harness::report_from_json(*j);
    if (auto j = read_optional_json(dir / kTranscriptFile)) transcript = harness::transcript_from_json(*j);
    if (!report && !transcript) r.missing_reports.push_back(id);
    r.scores.push_back(eval::score_case(bundle, report, transcript, options.eval));
  }
  r.summary = eval::aggregate(r.scores, options.mode, options.eval);

  const fs::path out = options.out / kSummaryDir;
  fs::create_directories(out);
  std::string lines;
  for (const auto& s : r.scores) lines += eval::case_score_to_json(s).dump() + "\n";
  write_file_atomic(out / "cases.jsonl", lines);
  write_file_atomic(out / "summary.json", dump_document(eval::summary_to_json(r.summary)));
  write_file_atomic(out / "summary.md", eval::render_markdown(r.summary));
  write_file_atomic(out / "summary.csv", eval::render_csv(r.summary));
  return r;
}

std::vector<std::string> split_command(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (char c : line) {
    if (quote) {
      if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_token) out.push_back(std::move(cur));
      cur.clear();
      in_token = false;
    } else {
      cur += c;
      in_token = true;
    }
  }
  if (quote) throw ValidationError("agent", "unterminated quote in command line");
  if (in_token) out.push_back(std::move(cur));
  return out;
}

}  // namespace irbench::cli
