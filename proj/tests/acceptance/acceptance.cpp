// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "irbench/cli/pipeline.hpp"
#include "irbench/eval/evidence.hpp"
#include "irbench/eval/metrics.hpp"
#include "irbench/scenario/bundle.hpp"
#include "irbench/scenario/timeline.hpp"
#include "irbench/telemetry/query.hpp"
#include "irbench/text/rouge.hpp"
#include "oracles.hpp"

using namespace irbench;
namespace fs = std::filesystem;
using Seconds = std::chrono::duration<double>;

namespace {

// Tolerances and sizes.
constexpr double kFbetaLo1 = 0.940, kFbetaHi1 = 0.944;
constexpr double kFbetaLo2 = 0.925, kFbetaHi2 = 0.931;
constexpr double kRateTol = 0.0005;
constexpr std::size_t kExpectedCases = 794;
constexpr std::size_t kMatcherPairs = 1000;
constexpr std::size_t kQueries = 200;
constexpr std::size_t kMaxLogSize = 10'000;
constexpr std::size_t kDags = 50;
constexpr double kGenerateBudgetS = 300.0;
constexpr double kSandwichBudgetPer100S = 120.0;
constexpr std::uint64_t kCorpusSeed = 42;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string describe(const std::string& success) const {
    if (ok()) return success;
    std::string s = std::to_string(failed_) + " failed:";
    for (const auto& f : failures_) s += " " + f + ";";
    return s;
  }

 private:
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
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

std::string fmt(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt_fmt(const std::optional<double>& v, int digits = 4) { return v ? fmt(*v, digits) : "n/a"; }

struct Context {
  fs::path work;
  fs::path record;
  fs::path source;
  int jobs = 1;
  // Filled by criterion 3 and reused afterwards.
  fs::path corpus;
  bool corpus_ok = false;
};

cli::EvaluateResult evaluate(const Context& ctx, const fs::path& run, const fs::path& out, eval::ValidationMode mode) {
  cli::EvaluateOptions ev;
  ev.corpus = ctx.corpus;
  ev.reports = run / cli::kReportsDir;
  ev.out = out;
  ev.mode = mode;
  return cli::cmd_evaluate(ev);
}

Outcome fbeta_reproduction(Context&) {
  const double a = eval::f_beta(0.971, 0.734, 3);
  const double b = eval::f_beta(0.940, 0.827, 3);
  const bool ok = a >= kFbetaLo1 && a <= kFbetaHi1 && b >= kFbetaLo2 && b <= kFbetaHi2;
  return {ok, "F3(0.971,0.734)=" + fmt(a) + " F3(0.940,0.827)=" + fmt(b)};
}

Outcome rate_reconstruction(Context&) {
  std::vector<eval::LabeledVerdict> v;
  for (int i = 0; i < 475; ++i) v.push_back({i < 14 ? Verdict::FP : Verdict::TP, Verdict::TP});
  for (int i = 0; i < 319; ++i) v.push_back({i < 85 ? Verdict::TP : Verdict::FP, Verdict::FP});
  const auto m = eval::score_m1(v);
  const double tp = *m.tp.value(), fp = *m.fp.value();
  const bool ok = std::abs(tp - 0.9705) <= kRateTol && std::abs(fp - 0.7335) <= kRateTol;
  return {ok, "m1_tp=" + fmt(tp) + " m1_fp=" + fmt(fp)};
}

Outcome distribution(Context& ctx) {
  ctx.corpus = ctx.work / "corpus-a";
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = cli::cmd_generate({std::nullopt, kCorpusSeed, ctx.corpus, ctx.jobs, std::nullopt});
  const double secs = Seconds(std::chrono::steady_clock::now() - t0).count();
  std::map<Category, std::size_t> per_cat;
  std::map<Verdict, std::size_t> per_verdict;
  const auto ids = cli::corpus_case_ids(ctx.corpus);
  for (const auto& id : ids) {
    const auto b = scenario::read_bundle(ctx.corpus / cli::kCasesDir / id);
    per_cat[b.manifest.category] += 1;
    per_verdict[b.ground_truth.verdict] += 1;
  }
  Check c;
  c.expect(r.cases == kExpectedCases && ids.size() == kExpectedCases, "case count " + std::to_string(ids.size()));
  const std::map<Category, std::size_t> want = {{Category::brute_force, 194},
                                                {Category::unauthorized_access, 298},
                                                {Category::misconfiguration, 175},
                                                {Category::malicious_file_execution, 127}};
  for (const auto& [cat, n] : want) {
    c.expect(per_cat[cat] == n, std::string(to_string(cat)) + "=" + std::to_string(per_cat[cat]));
  }
  c.expect(per_verdict[Verdict::TP] == 475, "TP=" + std::to_string(per_verdict[Verdict::TP]));
  c.expect(per_verdict[Verdict::FP] == 319, "FP=" + std::to_string(per_verdict[Verdict::FP]));
  c.expect(secs < kGenerateBudgetS, "took " + fmt(secs, 1) + "s");
  ctx.corpus_ok = c.ok();
  return {c.ok(), c.describe(std::to_string(ids.size()) + " cases, 194/298/175/127, 475 TP / 319 FP, " +
                             std::to_string(r.rejected) + " variations rejected, " + fmt(secs, 1) + "s")};
}

Outcome determinism(Context& ctx) {
  if (!ctx.corpus_ok) return {false, "no corpus from criterion 3"};
  const fs::path second = ctx.work / "corpus-b";
  cli::cmd_generate({std::nullopt, kCorpusSeed, second, std::max(1, ctx.jobs / 2), std::nullopt});
  Check c;
  const auto a = tree(ctx.corpus), b = tree(second);
  c.expect(a == b, "regenerated corpus differs");
  fs::remove_all(second);

  cli::RunOptions run;
  run.corpus = ctx.corpus;
  run.reference = "keyword";
  run.out = ctx.work / "det-run";
  run.jobs = ctx.jobs;
  cli::cmd_run(run);
  evaluate(ctx, run.out, ctx.work / "det-eval-1", eval::ValidationMode::validated);
  evaluate(ctx, run.out, ctx.work / "det-eval-2", eval::ValidationMode::validated);
  c.expect(tree(ctx.work / "det-eval-1" / cli::kSummaryDir) == tree(ctx.work / "det-eval-2" / cli::kSummaryDir),
           "summaries differ");
  return {c.ok(), c.describe(std::to_string(a.size()) + " corpus files identical, summaries identical")};
}

Outcome sandwich(Context& ctx) {
  if (!ctx.corpus_ok) return {false, "no corpus from criterion 3"};
  Check c;
  const auto run_agent = [&](const std::string& name) {
    cli::RunOptions run;
    run.corpus = ctx.corpus;
    run.reference = name;
    run.out = ctx.work / ("sandwich-" + name);
    run.jobs = ctx.jobs;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = cli::cmd_run(run);
    const double secs = Seconds(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs * 100.0 / static_cast<double>(std::max<std::size_t>(r.cases, 1)) < kSandwichBudgetPer100S,
             name + " took " + fmt(secs, 1) + "s");
    return evaluate(ctx, run.out, run.out, eval::ValidationMode::raw);
  };
  const auto oracle = run_agent("oracle");
  std::size_t tp_cases = 0;
  for (const auto& s : oracle.scores) {
    if (s.actual != Verdict::TP) continue;
    ++tp_cases;
    c.expect(s.predicted == Verdict::TP, "oracle missed " + s.case_id);
    c.expect(s.m2.recall == 1.0, "oracle recall " + s.case_id);
    c.expect(s.m2.novel_recall == 1.0, "oracle novel recall " + s.case_id);
    c.expect(s.evidence.outcome == eval::EvidenceOutcome::upheld, "oracle downgraded " + s.case_id);
  }
  c.expect(oracle.summary.overall.m1.tp.value() == 1.0, "oracle m1_tp");
  const auto parrot = run_agent("parrot");
  for (const auto& s : parrot.scores) {
    if (s.actual != Verdict::TP) continue;
    c.expect(s.m2.novel_recall == 0.0, "parrot found novel " + s.case_id);
    c.expect(s.evidence.outcome == eval::EvidenceOutcome::downgraded, "parrot upheld " + s.case_id);
  }
  return {c.ok(), c.describe("oracle m1_tp=1 recall=1 novel=1 upheld on " + std::to_string(tp_cases) +
                             " TP cases; parrot novel=0 and downgraded on all")};
}

Outcome matcher_equivalence(Context&) {
  Rng rng(6);
  std::size_t agree = 0, matched = 0;
  for (std::size_t i = 0; i < kMatcherPairs; ++i) {
    // Small vocabularies push scores around the threshold.
    const std::size_t vocab = 2 + rng.below(12);
    const auto ref = oracle::random_words(rng, 1 + rng.below(25), vocab);
    const auto cand = oracle::random_words(rng, rng.below(25), vocab);
    scenario::GroundTruth gt;
    gt.findings.push_back({"f", "r", oracle::join(ref), {}, {}, true});
    const auto m = eval::match_findings({oracle::join(cand)}, gt, eval::kDefaultTau);
    const bool brute = oracle::brute_rouge(ref, cand) > eval::kDefaultTau;
    matched += brute ? 1 : 0;
    agree += m.findings[0].matched == brute ? 1 : 0;
  }
  return {agree == kMatcherPairs,
          std::to_string(agree) + "/" + std::to_string(kMatcherPairs) + " agree (" + std::to_string(matched) + " matches)"};
}

Outcome query_equivalence(Context&) {
  Rng rng(7);
  std::size_t agree = 0, pages = 0, biggest = 0;
  std::vector<std::size_t> sizes = {kMaxLogSize, 0, 1};
  while (sizes.size() < 20) sizes.push_back(rng.below(kMaxLogSize + 1));
  for (std::size_t i = 0; i < kQueries; ++i) {
    const std::size_t n = sizes[i % sizes.size()];
    biggest = std::max(biggest, n);
    Rng log_rng(1000 + i % sizes.size());
    const auto log = oracle::random_log(log_rng, n);
    auto q = oracle::random_query(rng, log);
    if (rng.chance(1, 2)) q.max_results = static_cast<int>(1 + rng.below(1000));
    std::vector<std::string> got;
    for (;;) {
      const auto page = telemetry::lookup_events(log, q);
      ++pages;
      for (const auto& e : page.events) got.push_back(e.event_id);
      if (!page.next_page_token) break;
      q.page_token = page.next_page_token;
    }
    q.page_token.reset();
    agree += got == oracle::scan_query(log, q) ? 1 : 0;
  }
  return {agree == kQueries, std::to_string(agree) + "/" + std::to_string(kQueries) + " queries agree over " +
                                 std::to_string(pages) + " pages, largest log " + std::to_string(biggest)};
}

Outcome properties(Context& ctx) {
  Check c;
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::size_t> counts(1 + rng.below(40));
    for (auto& x : counts) x = rng.below(15);
    for (std::size_t n = 0; n < 16; ++n) {
      c.expect(*eval::m2_threshold(counts, n) >= *eval::m2_threshold(counts, n + 1), "threshold curve rises");
    }
  }
  for (int i = 0; i < 1000; ++i) {
    const auto a = oracle::random_words(rng, rng.below(20), 8);
    const auto b = oracle::random_words(rng, rng.below(20), 8);
    const double ab = text::rouge_l(a, b), ba = text::rouge_l(b, a);
    c.expect(ab >= 0.0 && ab <= 1.0, "rouge out of bounds");
    c.expect(ab == ba, "rouge asymmetric");
    if (!a.empty()) c.expect(text::rouge_l(a, a) == 1.0, "rouge identity");
  }
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.below(1001) / 1000.0, b = rng.below(1001) / 1000.0, d = (1 + rng.below(100)) / 1000.0;
    const double beta = 0.5 + rng.below(8) / 2.0;
    const double f = eval::f_beta(a, b, beta);
    c.expect(f <= eval::f_beta(std::min(1.0, a + d), b, beta) + 1e-12, "f_beta falls in tp");
    c.expect(f <= eval::f_beta(a, std::min(1.0, b + d), beta) + 1e-12, "f_beta falls in fp");
  }
  for (std::size_t dag = 0; dag < kDags; ++dag) {
    const auto steps = oracle::random_dag(rng, 2 + rng.below(10));
    const double factor = 0.05 + rng.below(200) / 100.0;
    const auto out = scenario::compress_timeline(steps, factor);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const auto& dep : out[i].depends_on) {
        const auto d = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.step_id == dep; });
        c.expect(d != out.end() && out[i].offset > d->last_offset(), "causal order broken in dag " + std::to_string(dag));
      }
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (steps[i].offset < steps[j].offset) c.expect(out[i].offset <= out[j].offset, "start order broken");
      }
    }
  }
  std::size_t novel = 0;
  if (!ctx.corpus_ok) {
    c.expect(false, "no corpus from criterion 3");
  } else {
    for (const auto& id : cli::corpus_case_ids(ctx.corpus)) {
      const auto b = scenario::read_bundle(ctx.corpus / cli::kCasesDir / id);
      for (const auto* f : b.ground_truth.novel_findings()) {
        ++novel;
        c.expect(!f->evidence.empty(), id + " " + f->finding_id + " has no evidence");
        for (const auto& ref : f->evidence) c.expect(eval::resolves(ref, b), id + " " + f->finding_id + " " + ref.value);
      }
    }
  }
  return {c.ok(), c.describe("threshold, ROUGE, F-beta, " + std::to_string(kDags) + " DAGs, " + std::to_string(novel) +
                             " novel findings resolvable")};
}

Outcome recorded_keyword_run(Context& ctx) {
  if (!ctx.corpus_ok) return {false, "no corpus from criterion 3"};
  Check c;
  const std::string readme = slurp(ctx.source / "README.md");
  c.expect(readme.find("not reproducible") != std::string::npos, "README does not document non-reproducibility");
  cli::RunOptions run;
  run.corpus = ctx.corpus;
  run.reference = "keyword";
  run.out = ctx.work / "keyword";
  run.jobs = ctx.jobs;
  const auto r = cli::cmd_run(run);
  c.expect(r.reports == r.cases, "keyword agent left cases without a report");
  fs::create_directories(ctx.record);
  std::string line;
  for (auto mode : {eval::ValidationMode::raw, eval::ValidationMode::validated}) {
    const fs::path out = ctx.work / ("keyword-" + std::string(to_string(mode)));
    const auto res = evaluate(ctx, run.out, out, mode);
    const std::string name = "keyword_" + std::string(to_string(mode));
    fs::copy_file(out / cli::kSummaryDir / "summary.json", ctx.record / (name + ".json"),
                  fs::copy_options::overwrite_existing);
    fs::copy_file(out / cli::kSummaryDir / "summary.md", ctx.record / (name + ".md"),
                  fs::copy_options::overwrite_existing);
    const auto& o = res.summary.overall;
    line += std::string(to_string(mode)) + ": m1_tp=" + opt_fmt(o.m1.tp.value(), 3) + " m1_fp=" +
            opt_fmt(o.m1.fp.value(), 3) + " F3=" + opt_fmt(o.f_beta, 3) + " novel=" + opt_fmt(o.avg_novel_found, 2) +
            "; ";
  }
  return {c.ok(), c.describe("recorded, not asserted (" + line + "written to " + ctx.record.string() + ")")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"irbench acceptance suite"};
  Context ctx;
  std::string work, record = "acceptance-record", source = IRBENCH_SOURCE_DIR;
  bool keep = false;
  ctx.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--work", work, "scratch directory (default: a fresh temp directory)");
  app.add_option("--record", record, "where the keyword-agent run is recorded");
  app.add_option("--source", source, "source tree holding README.md");
  app.add_option("--jobs", ctx.jobs, "parallel jobs")->check(CLI::PositiveNumber);
  app.add_flag("--keep", keep, "keep the scratch directory");
  CLI11_PARSE(app, argc, argv);

  ctx.work = work.empty() ? fs::temp_directory_path() / ("irbench-acceptance-" + std::to_string(::getpid())) : fs::path(work);
  ctx.record = record;
  ctx.source = source;
  fs::remove_all(ctx.work);
  fs::create_directories(ctx.work);

  const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria = {
      {"F-beta reproduction", fbeta_reproduction},
      {"rate reconstruction", rate_reconstruction},
      {"distribution reproduction", distribution},
      {"determinism", determinism},
      {"oracle/parrot sandwich", sandwich},
      {"matcher oracle equivalence", matcher_equivalence},
      {"query oracle equivalence", query_equivalence},
      {"property suites", properties},
      {"keyword agent end-to-end run", recorded_keyword_run},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = Seconds(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << " " << criteria[i].first << ": " << o.detail << " ("
              << fmt(secs, 1) << "s)" << std::endl;
  }
  if (!keep) fs::remove_all(ctx.work);
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
