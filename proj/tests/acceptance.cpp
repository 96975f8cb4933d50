// Acceptance suite: one pass/fail line per criterion. Usage:
//   acceptance <path-to-aspectgp-cli>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "aspectgp/batch.hpp"
#include "aspectgp/classifier.hpp"
#include "aspectgp/corpus.hpp"
#include "aspectgp/evolve.hpp"
#include "aspectgp/index.hpp"
#include "aspectgp/metrics.hpp"
#include "aspectgp/synth.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace aspectgp;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
fs::path g_dir;
int g_failures = 0;

void report(int criterion, const char* name, bool ok, double seconds,
            const std::string& detail) {
  std::printf("[%s] criterion %d (%s): %s  [%.1fs]\n", ok ? "PASS" : "FAIL",
              criterion, name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void run_criterion(int criterion, const char* name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = Clock::now();
  std::pair<bool, std::string> outcome{false, "exception"};
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  report(criterion, name, outcome.first, seconds, outcome.second);
}

int run_cli(const std::string& args) {
  const std::string command = g_cli + " " + args + " 2>/dev/null >/dev/null";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// report rows keyed by the run column; values are the six percentages
std::map<std::string, std::vector<double>> parse_report(const fs::path& path) {
  std::map<std::string, std::vector<double>> rows;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::stringstream fields(line);
    std::string name, cell;
    std::getline(fields, name, '\t');
    std::vector<double> values;
    while (std::getline(fields, cell, '\t')) values.push_back(std::stod(cell));
    rows[name] = values;
  }
  return rows;
}

constexpr int kTelicRecall = 0;
constexpr int kNonTelicRecall = 2;
constexpr int kAccuracy = 4;

// ---- criterion bodies ----

std::pair<bool, std::string> baseline_reproduction() {
  const double base_telic = 138.0 / 203.0;
  const double n = 203.0;
  struct Cell {
    const char* row;
    MetricsRow got;
    std::array<double, 5> want;  // percentages
  };
  const std::array<Cell, 3> cases = {
      Cell{"A", baseline(BaselineSpec::all_telic(), base_telic, n),
           {100.0, 68.0, 0.0, 100.0, 68.0}},
      Cell{"B", baseline(BaselineSpec::random_fraction(0.264), base_telic, n),
           {73.6, 68.0, 26.4, 32.0, 58.5}},
      Cell{"C", baseline(BaselineSpec::random_fraction(0.727), base_telic, n),
           {27.3, 68.0, 72.7, 32.0, 41.8}}};

  std::string detail;
  bool ok = true;
  for (const Cell& c : cases) {
    const std::array<double, 5> got = {
        100.0 * c.got.telic_recall, 100.0 * c.got.telic_precision,
        100.0 * c.got.non_telic_recall, 100.0 * c.got.non_telic_precision,
        100.0 * c.got.accuracy};
    for (int i = 0; i < 5; ++i) {
      if (std::abs(got[i] - c.want[i]) > 0.1) {
        ok = false;
        detail += std::string(" row ") + c.row + " cell " +
                  std::to_string(i) + " got " + std::to_string(got[i]);
      }
    }
  }
  if (ok) detail = "baseline rows A/B/C reproduced to within 0.1pp";
  return {ok, detail};
}

std::pair<bool, std::string> retrieval_oracle() {
  Rng rng(20240915);
  int corpora = 0, queries = 0;
  for (int c = 0; c < 50; ++c) {
    const std::size_t n = 1 + rng.index(500);
    const Corpus corpus = oracle::random_corpus(rng, n, 3, 0.35);
    const CorpusIndex index(corpus);
    ++corpora;
    for (int q = 0; q < 20; ++q) {
      const ConstituentKey key =
          q % 2 == 0 ? oracle::random_key(rng, 3, 0.35)
                     : corpus.records[rng.index(n)].key;
      const int k = 1 + static_cast<int>(rng.below(200));
      const bool exclude = rng.bernoulli(0.5);
      const std::optional<std::uint32_t> self =
          exclude ? std::optional<std::uint32_t>(
                        static_cast<std::uint32_t>(rng.index(n)))
                  : std::nullopt;
      const SimilarityConfig config{k, exclude};
      const SimilarSet got = index.retrieve_similar(key, config, self);
      const SimilarSet want =
          oracle::brute_force_similar(corpus, key, config, self);
      if (got.member_ids != want.member_ids ||
          got.level_reached != want.level_reached ||
          got.exact_count != want.exact_count)
        return {false, "mismatch at corpus " + std::to_string(c) + " query " +
                           std::to_string(q)};
      ++queries;
    }
  }
  return {true, std::to_string(corpora) + " corpora, " +
                    std::to_string(queries) + " queries equal brute force"};
}

std::pair<bool, std::string> tree_eval_oracle() {
  Rng rng(5551212);
  for (int i = 0; i < 1000; ++i) {
    const ExprTree tree = oracle::random_test_tree(rng, 7);
    const IndicatorBits bits =
        IndicatorBits::unpack(static_cast<std::uint8_t>(rng.below(32)));
    if (eval_tree(tree, bits) != oracle::naive_eval_tree(tree, bits))
      return {false, "eval mismatch at pair " + std::to_string(i)};

    FeatureMatrix fm;
    const std::size_t rows = rng.index(120);
    for (std::size_t r = 0; r < rows; ++r)
      fm.rows.push_back(static_cast<std::uint8_t>(rng.below(32)));
    if (score(tree, fm) != oracle::naive_score(tree, fm.rows))
      return {false, "score mismatch at pair " + std::to_string(i)};
  }

  // saturation: (2)^(2^k) by repeated squaring, alternating-sign mixtures
  ExprTree two = parse_tree("(add NP NP)");
  ExprTree chain = two;
  for (int i = 0; i < 9; ++i) {
    ExprTree squared;
    squared.code.push_back(Op::Mul);
    squared.code.insert(squared.code.end(), chain.code.begin(),
                        chain.code.end());
    squared.code.insert(squared.code.end(), chain.code.begin(),
                        chain.code.end());
    chain = std::move(squared);
  }
  const IndicatorBits ones{1, 1, 1, 1, 1};
  if (eval_tree(chain, ones) != std::numeric_limits<std::int64_t>::max() ||
      eval_tree(chain, ones) != oracle::naive_eval_tree(chain, ones))
    return {false, "multiply chain does not saturate"};

  ExprTree signed_chain;
  signed_chain.code.push_back(Op::If);
  signed_chain.code.push_back(Op::SpecialPerfect);
  signed_chain.code.insert(signed_chain.code.end(), chain.code.begin(),
                           chain.code.end());
  signed_chain.code.push_back(Op::Sub);
  signed_chain.code.push_back(Op::NotProgressive);
  signed_chain.code.insert(signed_chain.code.end(), chain.code.begin(),
                           chain.code.end());
  FeatureMatrix mixture;
  for (int i = 0; i < 100; ++i)
    mixture.rows.push_back(IndicatorBits{1, i % 3 != 0, 0, 0, 0}.pack());
  if (score(signed_chain, mixture) !=
      oracle::naive_score(signed_chain, mixture.rows))
    return {false, "saturating score mismatch on signed mixture"};

  return {true, "1000 random pairs plus saturation cases agree"};
}

std::pair<bool, std::string> threshold_optimality() {
  Rng rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(60);
    std::vector<std::pair<std::int64_t, AspectLabel>> scored;
    for (std::size_t i = 0; i < n; ++i)
      scored.emplace_back(
          static_cast<std::int64_t>(rng.below(21)) - 10,
          rng.bernoulli(0.5) ? AspectLabel::Telic : AspectLabel::NonTelic);
    for (Objective objective :
         {Objective::Accuracy, Objective::NonTelicFMeasure}) {
      const CalibrationResult got = calibrate_threshold(scored, objective);
      const auto want = oracle::exhaustive_calibrate(scored, objective);
      if (std::abs(got.objective_value - want.value) > 1e-12)
        return {false, "objective mismatch at trial " + std::to_string(trial)};
      if (got.threshold != want.threshold)
        return {false, "tie-break mismatch at trial " + std::to_string(trial)};
    }
  }
  return {true, "200 random sets match the exhaustive scan for both objectives"};
}

std::pair<bool, std::string> elitism_monotonicity() {
  GPConfig gp;
  gp.population_size = 100;
  gp.total_inserts = 2000;
  gp.max_nodes = 128;
  const FitnessFn fitness = [&gp](const ExprTree& t) {
    return static_cast<double>(
        std::min(t.node_count(), static_cast<std::size_t>(gp.max_nodes)));
  };
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    gp.seed = seed;
    double last_best = -1.0;
    bool ok = true;
    std::string why;
    const ProgressSink sink = [&](const ProgressEvent& ev) {
      if (ev.best_fitness < last_best) {
        ok = false;
        why = "best decreased at insert " + std::to_string(ev.insert_count);
      }
      last_best = ev.best_fitness;
      for (const Individual& ind : ev.population->individuals) {
        if (!is_valid_tree(ind.tree) ||
            ind.tree.node_count() > static_cast<std::size_t>(gp.max_nodes)) {
          ok = false;
          why = "invalid tree at insert " + std::to_string(ev.insert_count);
        }
      }
    };
    Rng rng(seed);
    evolve(rng, fitness, gp, sink);
    if (!ok) return {false, "seed " + std::to_string(seed) + ": " + why};
  }
  return {true, "20 runs of 2000 inserts: monotone best, invariants hold"};
}

// Shared setup for criteria 6-8: a default planted corpus with labels kept
// on a stratified sample of 400 records.
fs::path planted_corpus_400() {
  static fs::path path;
  if (!path.empty()) return path;
  auto [corpus, gen_report] = generate(default_planted_spec());

  std::vector<std::uint32_t> labeled = corpus.labeled_event_ids();
  Rng rng(2025);
  rng.shuffle(labeled);
  labeled.resize(400);
  std::vector<bool> keep(corpus.size(), false);
  for (std::uint32_t id : labeled) keep[id] = true;
  for (auto& rec : corpus.records)
    if (!keep[rec.id]) rec.label = AspectLabel::Unknown;

  path = g_dir / "planted400.jsonl";
  write_corpus_file(corpus, path.string());
  return path;
}

std::pair<bool, std::string> planted_signal() {
  const fs::path corpus = planted_corpus_400();
  const fs::path acc_report = g_dir / "planted_accuracy.tsv";
  const fs::path f_report = g_dir / "planted_f.tsv";
  const std::string base = "evaluate --corpus " + corpus.string() +
                           " --runs 3 --seed 131 --out ";
  if (run_cli(base + acc_report.string() + " --objective accuracy") != 0)
    return {false, "accuracy batch failed"};
  if (run_cli(base + f_report.string() + " --objective non_telic_f") != 0)
    return {false, "non_telic_f batch failed"};

  const auto acc_rows = parse_report(acc_report);
  const auto f_rows = parse_report(f_report);
  const double mean_accuracy = acc_rows.at("mean")[kAccuracy] / 100.0;
  const double acc_recall = acc_rows.at("mean")[kNonTelicRecall];
  const double f_recall = f_rows.at("mean")[kNonTelicRecall];

  std::ostringstream detail;
  detail << "accuracy " << mean_accuracy << " (>= 0.85, > 0.68); non-telic "
         << "recall " << f_recall << " vs " << acc_recall;
  const bool ok =
      mean_accuracy >= 0.85 && mean_accuracy > 0.68 && f_recall > acc_recall;
  return {ok, detail.str()};
}

std::pair<bool, std::string> null_signal() {
  GenSpec spec = default_planted_spec();
  spec.non_telic = spec.telic;
  spec.cluster_purity = 0.5;
  spec.seed = 31415;
  auto [corpus, gen_report] = generate(spec);

  std::vector<std::uint32_t> labeled = corpus.labeled_event_ids();
  Rng rng(2026);
  rng.shuffle(labeled);
  labeled.resize(400);
  std::size_t telic = 0;
  std::vector<bool> keep(corpus.size(), false);
  for (std::uint32_t id : labeled) {
    keep[id] = true;
    telic += corpus.records[id].label == AspectLabel::Telic;
  }
  for (auto& rec : corpus.records)
    if (!keep[rec.id]) rec.label = AspectLabel::Unknown;
  const double telic_fraction = static_cast<double>(telic) / 400.0;
  const double majority = std::max(telic_fraction, 1.0 - telic_fraction);

  const fs::path corpus_path = g_dir / "null400.jsonl";
  write_corpus_file(corpus, corpus_path.string());
  const fs::path report = g_dir / "null.tsv";
  if (run_cli("evaluate --corpus " + corpus_path.string() +
              " --runs 3 --seed 88 --objective accuracy --out " +
              report.string()) != 0)
    return {false, "null batch failed"};

  const double mean_accuracy =
      parse_report(report).at("mean")[kAccuracy] / 100.0;
  std::ostringstream detail;
  detail << "accuracy " << mean_accuracy << " within 0.05 of majority rate "
         << majority;
  return {std::abs(mean_accuracy - majority) <= 0.05, detail.str()};
}

std::pair<bool, std::string> determinism() {
  const fs::path corpus = planted_corpus_400();

  const fs::path model_a = g_dir / "det_model_a.json";
  const fs::path model_b = g_dir / "det_model_b.json";
  const std::string train_args = "train --corpus " + corpus.string() +
                                 " --seed 5 --pop 120 --inserts 1000 --model ";
  if (run_cli(train_args + model_a.string()) != 0 ||
      run_cli(train_args + model_b.string()) != 0)
    return {false, "train invocation failed"};
  if (slurp(model_a) != slurp(model_b))
    return {false, "model files differ between identical train runs"};

  std::array<fs::path, 4> reports = {
      g_dir / "det_j1_a.tsv", g_dir / "det_j1_b.tsv", g_dir / "det_j4_a.tsv",
      g_dir / "det_j4_b.tsv"};
  const std::string eval_args = "evaluate --corpus " + corpus.string() +
                                " --runs 3 --seed 17 --pop 120 --inserts 1000"
                                " --objective non_telic_f";
  for (int i = 0; i < 4; ++i) {
    const int jobs = i < 2 ? 1 : 4;
    if (run_cli(eval_args + " --jobs " + std::to_string(jobs) + " --out " +
                reports[i].string()) != 0)
      return {false, "evaluate invocation failed"};
  }
  const std::string j1 = slurp(reports[0]);
  if (j1 != slurp(reports[1])) return {false, "jobs=1 reruns differ"};
  const std::string j4 = slurp(reports[2]);
  if (j4 != slurp(reports[3])) return {false, "jobs=4 reruns differ"};
  if (j1 != j4) return {false, "jobs=1 and jobs=4 reports differ"};
  return {true, "model and report files byte-identical across reruns and jobs"};
}

std::pair<bool, std::string> binomial_criterion() {
  for (std::uint64_t n : {1ULL, 7ULL, 30ULL, 303ULL}) {
    const double got = binomial_test(n, n, 0.5);
    const double want = std::pow(0.5, static_cast<double>(n));
    if (std::abs(got - want) > 1e-12 * want)
      return {false, "closed form 0.5^n failed at n=" + std::to_string(n)};
  }
  for (std::uint64_t n : {1ULL, 10ULL, 250ULL})
    if (binomial_test(0, n, 0.33) != 1.0)
      return {false, "closed form P[X>=0]=1 failed"};

  Rng rng(424242);
  for (int instance = 0; instance < 10; ++instance) {
    const std::uint64_t n = 10 + rng.below(291);  // n <= 300
    const double p0 = 0.1 + 0.8 * rng.unit();
    const double mean = static_cast<double>(n) * p0;
    const double sd = std::sqrt(mean * (1 - p0));
    const double offset = (rng.unit() * 4.0 - 2.0) * sd;
    const std::uint64_t s = static_cast<std::uint64_t>(std::clamp(
        mean + offset, 1.0, static_cast<double>(n)));
    const double exact = binomial_test(s, n, p0);

    constexpr int kDraws = 1000000;
    int hits = 0;
    for (int d = 0; d < kDraws; ++d) {
      std::uint64_t successes = 0;
      for (std::uint64_t i = 0; i < n; ++i) successes += rng.bernoulli(p0);
      hits += successes >= s;
    }
    const double estimate = static_cast<double>(hits) / kDraws;
    const double sigma =
        std::sqrt(std::max(exact * (1.0 - exact), 1e-12) / kDraws);
    if (std::abs(estimate - exact) > 3.0 * sigma + 1e-6)
      return {false, "Monte-Carlo disagreement at instance " +
                         std::to_string(instance) + ": exact " +
                         std::to_string(exact) + " vs " +
                         std::to_string(estimate)};
  }
  return {true, "closed forms exact; 10 instances within 3 sigma of 1e6-draw MC"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-aspectgp-cli>\n");
    return 2;
  }
  g_cli = argv[1];
  g_dir = fs::temp_directory_path() /
          ("aspectgp_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_dir);

  run_criterion(1, "baseline reproduction", baseline_reproduction);
  run_criterion(2, "retrieval oracle", retrieval_oracle);
  run_criterion(3, "tree evaluation oracle", tree_eval_oracle);
  run_criterion(4, "threshold optimality", threshold_optimality);
  run_criterion(5, "elitism and monotonicity", elitism_monotonicity);
  run_criterion(6, "planted-signal end to end", planted_signal);
  run_criterion(7, "null-signal sanity", null_signal);
  run_criterion(8, "CLI determinism", determinism);
  run_criterion(9, "exact binomial test", binomial_criterion);

  fs::remove_all(g_dir);
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
