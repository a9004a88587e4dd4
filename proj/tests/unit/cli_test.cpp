// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "irbench/cli/pipeline.hpp"
#include "irbench/variation/benchmark.hpp"

using namespace irbench;
using namespace irbench::cli;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("irbench-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

fs::path small_config(const fs::path& dir, int tp = 2, int fp = 1) {
  variation::DistributionConfig cfg = variation::default_config();
  for (auto& [c, n] : cfg.counts) n = {tp, fp};
  const fs::path p = dir / "config.json";
  std::ofstream(p) << variation::config_to_json(cfg).dump(2);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(IRBENCH_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(SplitCommand, QuotesAndWhitespace) {
  EXPECT_EQ(split_command("python3  agent.py --model 'big one' \"x y\""),
            (std::vector<std::string>{"python3", "agent.py", "--model", "big one", "x y"}));
  EXPECT_EQ(split_command("a '' b"), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_TRUE(split_command("   ").empty());
  EXPECT_THROW(split_command("a 'b"), ValidationError);
}

TEST(Generate, DeterministicAndIndependentOfJobs) {
  TempDir dir;
  const fs::path cfg = small_config(dir.path());
  const auto a = cmd_generate({cfg, 11, dir.path() / "a", 1, std::nullopt});
  cmd_generate({cfg, 11, dir.path() / "b", 4, std::nullopt});
  EXPECT_EQ(a.cases, 12u);
  EXPECT_EQ(tree(dir.path() / "a"), tree(dir.path() / "b"));
  EXPECT_EQ(corpus_case_ids(dir.path() / "a").size(), 12u);
  cmd_generate({cfg, 12, dir.path() / "b", 1, std::nullopt});
  EXPECT_NE(tree(dir.path() / "a"), tree(dir.path() / "b"));
  // Regenerating over an existing corpus replaces it.
  cmd_generate({cfg, 11, dir.path() / "b", 1, std::nullopt});
  EXPECT_EQ(tree(dir.path() / "a"), tree(dir.path() / "b"));
}

TEST(Generate, RefusesForeignDirectory) {
  TempDir dir;
  fs::create_directories(dir.path() / "out" / kCasesDir);
  std::ofstream(dir.path() / "out" / kCasesDir / "precious.txt") << "keep";
  EXPECT_THROW(cmd_generate({small_config(dir.path()), 1, dir.path() / "out", 1, std::nullopt}), Error);
  EXPECT_TRUE(fs::exists(dir.path() / "out" / kCasesDir / "precious.txt"));
}

TEST(Generate, UnknownCategoryExitsNonzero) {
  TempDir dir;
  auto j = variation::config_to_json(variation::default_config());
  j["categories"]["phishing"] = {{"tp", 1}, {"fp", 1}};
  std::ofstream(dir.path() / "bad.json") << j.dump();
  EXPECT_NE(run_cli("generate --config " + (dir.path() / "bad.json").string() + " --out " + (dir.path() / "c").string()), 0);
  EXPECT_EQ(run_cli("generate --config " + small_config(dir.path()).string() + " --out " + (dir.path() / "c").string()), 0);
}

TEST(Run, ParrotProducesOneReportPerCaseWithoutCalls) {
  TempDir dir;
  cmd_generate({small_config(dir.path(), 2, 1), 3, dir.path() / "corpus", 2, std::nullopt});
  RunOptions opt;
  opt.corpus = dir.path() / "corpus";
  opt.agent_command = {IRBENCH_AGENT_BIN, "parrot"};
  opt.out = dir.path() / "run";
  opt.jobs = 3;
  opt.max_cases = 10;
  const RunResult r = cmd_run(opt);
  EXPECT_EQ(r.cases, 10u);
  EXPECT_EQ(r.reports, 10u);
  EXPECT_TRUE(r.failures.empty());
  std::size_t found = 0;
  for (const auto& e : fs::directory_iterator(dir.path() / "run" / kReportsDir)) {
    ++found;
    EXPECT_TRUE(fs::exists(e.path() / kReportFile));
    const ojson t = ojson::parse(slurp(e.path() / kTranscriptFile));
    EXPECT_EQ(t["call_count"], 0);
  }
  EXPECT_EQ(found, 10u);
}

TEST(Run, CrashOnOneCaseIsIsolated) {
  TempDir dir;
  cmd_generate({small_config(dir.path(), 2, 1), 3, dir.path() / "corpus", 2, std::nullopt});
  const auto ids = corpus_case_ids(dir.path() / "corpus");
  ASSERT_GE(ids.size(), 5u);
  const std::string script = "read -r line; case \"$line\" in *'\"" + ids[2] +
                             "\"'*) echo boom >&2; exit 3;; esac; { printf '%s\\n' \"$line\"; cat; } | " +
                             IRBENCH_AGENT_BIN + " parrot";
  RunOptions opt;
  opt.corpus = dir.path() / "corpus";
  opt.agent_command = {"/bin/sh", "-c", script};
  opt.out = dir.path() / "run";
  opt.max_cases = 5;
  const RunResult r = cmd_run(opt);
  EXPECT_EQ(r.cases, 5u);
  EXPECT_EQ(r.reports, 4u);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].case_id, ids[2]);
  EXPECT_EQ(r.failures[0].status, "error");
  EXPECT_FALSE(fs::exists(dir.path() / "run" / kReportsDir / ids[2] / kReportFile));
  EXPECT_TRUE(fs::exists(dir.path() / "run" / kReportsDir / ids[2] / kTranscriptFile));

  // The crashed case counts as missed and leaves M2 and M3.
  EvaluateOptions ev;
  ev.corpus = opt.corpus;
  ev.reports = dir.path() / "run" / kReportsDir;
  ev.out = dir.path() / "run";
  const auto res = cmd_evaluate(ev);
  EXPECT_EQ(res.summary.overall.unscorable, 1u);
  EXPECT_EQ(res.missing_reports.size(), ids.size() - 5);
}

TEST(Evaluate, OracleScoresPerfectly) {
  TempDir dir;
  cmd_generate({small_config(dir.path(), 3, 0), 5, dir.path() / "corpus", 2, std::nullopt});
  RunOptions opt;
  opt.corpus = dir.path() / "corpus";
  opt.reference = "oracle";
  opt.out = dir.path() / "oracle";
  opt.jobs = 2;
  cmd_run(opt);
  EvaluateOptions ev;
  ev.corpus = opt.corpus;
  ev.reports = dir.path() / "oracle" / kReportsDir;
  ev.out = dir.path() / "oracle";
  ev.mode = eval::ValidationMode::validated;
  const auto res = cmd_evaluate(ev);
  EXPECT_EQ(res.summary.overall.n, 12u);
  EXPECT_DOUBLE_EQ(*res.summary.overall.m1.tp.value(), 1.0);
  EXPECT_FALSE(res.summary.overall.m1.fp.value().has_value());
  EXPECT_DOUBLE_EQ(*res.summary.overall.novel_coverage, 1.0);
  EXPECT_DOUBLE_EQ(*res.summary.overall.m3, 1.0);
  for (const char* f : {"summary.json", "summary.md", "summary.csv", "cases.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "oracle" / kSummaryDir / f)) << f;
  }
  const std::string first = slurp(dir.path() / "oracle" / kSummaryDir / "summary.json");
  cmd_evaluate(ev);
  EXPECT_EQ(slurp(dir.path() / "oracle" / kSummaryDir / "summary.json"), first);
}

TEST(Evaluate, BetaChangesOnlyTheCombinedScore) {
  TempDir dir;
  cmd_generate({small_config(dir.path(), 2, 2), 6, dir.path() / "corpus", 2, std::nullopt});
  RunOptions opt;
  opt.corpus = dir.path() / "corpus";
  opt.reference = "keyword";
  opt.out = dir.path() / "run";
  cmd_run(opt);
  EvaluateOptions ev;
  ev.corpus = opt.corpus;
  ev.reports = dir.path() / "run" / kReportsDir;
  ev.out = dir.path() / "b3";
  const auto b3 = cmd_evaluate(ev).summary;
  ev.eval.beta = 1;
  ev.out = dir.path() / "b1";
  const auto b1 = cmd_evaluate(ev).summary;
  EXPECT_EQ(summary_to_json(b1)["overall"]["m1_tp"], summary_to_json(b3)["overall"]["m1_tp"]);
  EXPECT_EQ(summary_to_json(b1)["overall"]["m1_fp"], summary_to_json(b3)["overall"]["m1_fp"]);
  const double tp = *b3.overall.m1.tp.value(), fp = *b3.overall.m1.fp.value();
  EXPECT_NEAR(*b3.overall.f_beta, eval::f_beta(tp, fp, 3), 1e-12);
  EXPECT_NEAR(*b1.overall.f_beta, 2 * tp * fp / (tp + fp), 1e-12);
  if (tp != fp) {
    EXPECT_NE(*b1.overall.f_beta, *b3.overall.f_beta);
  }
}

TEST(Cli, EndToEndIsReproducible) {
  TempDir dir;
  const std::string cfg = small_config(dir.path(), 2, 1).string();
  const auto d = [&](const char* name) { return (dir.path() / name).string(); };
  for (const char* run : {"x", "y"}) {
    const std::string root = d(run);
    ASSERT_EQ(run_cli("generate --config " + cfg + " --seed 9 --jobs 3 --out " + root), 0);
    ASSERT_EQ(run_cli("run --corpus " + root + " --reference keyword --jobs 2 --out " + root), 0);
    ASSERT_EQ(run_cli("evaluate --corpus " + root + " --reports " + root + "/reports --out " + root + " --validated"), 0);
  }
  EXPECT_EQ(tree(dir.path() / "x" / kCasesDir), tree(dir.path() / "y" / kCasesDir));
  EXPECT_EQ(slurp(dir.path() / "x" / kSummaryDir / "summary.json"), slurp(dir.path() / "y" / kSummaryDir / "summary.json"));
  EXPECT_EQ(run_cli("report --out " + d("x") + " --format csv"), 0);
  EXPECT_NE(run_cli("report --out " + d("x") + " --format pdf"), 0);
  EXPECT_NE(run_cli("run --corpus " + d("nowhere") + " --reference parrot --out " + d("z")), 0);
}
