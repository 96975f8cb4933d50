#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aspectgp/classifier.hpp"
#include "aspectgp/metrics.hpp"

namespace aspectgp {

struct RunRow {
  int run = 0;  // 1-based
  MetricsRow metrics;
  std::size_t test_size = 0;
  std::size_t test_telic = 0;
};

struct BatchReport {
  std::vector<RunRow> runs;
  MetricsRow mean;
  MetricsRow baseline_a;
  MetricsRow baseline_b;
  MetricsRow baseline_c;
  double base_telic = 0.0;  // mean telic fraction of the test halves
  double random_p = 0.0;    // mean non-telic recall, used for B and C
};

struct BatchConfig {
  Objective objective = Objective::Accuracy;
  int n_runs = 1;
  std::uint64_t base_seed = 42;
  double train_fraction = 0.5;
  GPConfig gp;  // seed field is overridden per run
  SimilarityConfig similarity;
  int jobs = 1;
  ProgressSink progress;  // shared across runs; serialized internally
};

/// Carries the rows of the runs that finished before a run failed.
class BatchError : public std::runtime_error {
 public:
  BatchError(const std::string& message, std::vector<RunRow> completed)
      : std::runtime_error(message), completed_(std::move(completed)) {}
  const std::vector<RunRow>& completed() const { return completed_; }

 private:
  std::vector<RunRow> completed_;
};

/// Run i uses seed base_seed + i for both its split and its GP run:
/// split labeled pool, train on the training half, evaluate on the test
/// half. Rows are averaged per metric and reported alongside the three
/// uninformed baselines. Runs execute concurrently when jobs > 1 with
/// identical results.
BatchReport run_batch(const CorpusIndex& index,
                      std::span<const std::uint32_t> labeled_ids,
                      const BatchConfig& config);

/// Tab-separated report, one row per run plus mean and baseline rows;
/// values are percentages with one decimal.
std::string render_report(const BatchReport& report);

}  // namespace aspectgp
