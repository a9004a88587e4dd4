// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irbench/eval/summary.hpp"
#include "irbench/harness/session.hpp"

namespace irbench::cli {

namespace fs = std::filesystem;

// Layout under a workspace root.
inline constexpr const char* kCasesDir = "cases";
inline constexpr const char* kReportsDir = "reports";
inline constexpr const char* kSummaryDir = "summary";
inline constexpr const char* kCorpusManifest = "manifest.json";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kTranscriptFile = "transcript.json";

struct GenerateOptions {
  std::optional<fs::path> config;  // default distribution when absent
  std::uint64_t seed = 0;
  fs::path out;
  int jobs = 1;
  std::optional<fs::path> extra_specs;  // NDJSON scenario specs
};

struct GenerateResult {
  std::size_t cases = 0;
  std::size_t rejected = 0;
};

// Replaces a previous corpus under `out`; refuses to touch a non-empty
// cases directory that has no corpus manifest next to it.
GenerateResult cmd_generate(const GenerateOptions& options);

// Case ids of a corpus, from its manifest when present, else the case
// directories, sorted.
std::vector<std::string> corpus_case_ids(const fs::path& corpus);

struct RunOptions {
  fs::path corpus;
  // Exactly one of these: an external command line, or a built-in agent run
  // in-process.
  std::vector<std::string> agent_command;
  std::optional<std::string> reference;
  std::uint64_t agent_seed = 0;
  fs::path out;  // reports go to <out>/reports/<id>/
  int jobs = 1;
  std::size_t max_cases = 0;  // 0: all
  harness::SessionLimits limits;
};

struct CaseFailure {
  std::string case_id;
  std::string status;
  std::string error;
};

struct RunResult {
  std::size_t cases = 0;
  std::size_t reports = 0;
  std::vector<CaseFailure> failures;
};

// Throws ValidationError when the corpus has no runnable case.
RunResult cmd_run(const RunOptions& options);

struct EvaluateOptions {
  fs::path corpus;
  fs::path reports;  // directory holding <id>/report.json
  fs::path out;      // summary goes to <out>/summary/
  eval::EvalOptions eval;
  eval::ValidationMode mode = eval::ValidationMode::raw;
};

struct EvaluateResult {
  eval::BenchmarkSummary summary;
  std::vector<eval::CaseScore> scores;
  std::vector<std::string> missing_reports;
};

EvaluateResult cmd_evaluate(const EvaluateOptions& options);

// Splits a command line on whitespace; single and double quotes group.
std::vector<std::string> split_command(const std::string& line);

}  // namespace irbench::cli
