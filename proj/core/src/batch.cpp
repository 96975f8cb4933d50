#include "aspectgp/batch.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <optional>
#include <thread>

namespace aspectgp {

namespace {

RunRow execute_run(const CorpusIndex& index,
                   std::span<const std::uint32_t> labeled_ids, int run_index,
                   const BatchConfig& config, const ProgressSink& sink) {
  const std::uint64_t run_seed =
      config.base_seed + static_cast<std::uint64_t>(run_index);

  std::vector<AspectLabel> labels;
  labels.reserve(labeled_ids.size());
  for (std::uint32_t id : labeled_ids)
    labels.push_back(index.corpus().records.at(id).label);

  const SplitSpec split_spec{config.train_fraction, run_seed, true};
  const SplitResult parts = split(labeled_ids, labels, split_spec);

  TrainOptions options;
  options.objective = config.objective;
  options.gp = config.gp;
  options.gp.seed = run_seed;
  options.similarity = config.similarity;
  options.progress = sink;
  const TrainReport trained = train(index, parts.train_ids, options);

  ConfusionMatrix cm;
  std::size_t telic_gold = 0;
  for (std::uint32_t id : parts.test_ids) {
    const ClauseRecord& clause = index.corpus().records[id];
    const auto [predicted, s] = classify(trained.model, index, clause);
    const bool gold_telic = clause.label == AspectLabel::Telic;
    const bool pred_telic = predicted == AspectLabel::Telic;
    telic_gold += gold_telic;
    if (gold_telic && pred_telic) ++cm.tp;
    else if (gold_telic) ++cm.fn;
    else if (pred_telic) ++cm.fp;
    else ++cm.tn;
  }

  RunRow row;
  row.run = run_index + 1;
  row.metrics = metrics(cm);
  row.test_size = parts.test_ids.size();
  row.test_telic = telic_gold;
  return row;
}

MetricsRow mean_of(const std::vector<RunRow>& rows) {
  MetricsRow mean;
  for (const RunRow& r : rows) {
    mean.telic_recall += r.metrics.telic_recall;
    mean.telic_precision += r.metrics.telic_precision;
    mean.non_telic_recall += r.metrics.non_telic_recall;
    mean.non_telic_precision += r.metrics.non_telic_precision;
    mean.accuracy += r.metrics.accuracy;
    mean.non_telic_f += r.metrics.non_telic_f;
    mean.telic_recall_flagged |= r.metrics.telic_recall_flagged;
    mean.telic_precision_flagged |= r.metrics.telic_precision_flagged;
    mean.non_telic_recall_flagged |= r.metrics.non_telic_recall_flagged;
    mean.non_telic_precision_flagged |= r.metrics.non_telic_precision_flagged;
  }
  const double n = static_cast<double>(rows.size());
  mean.telic_recall /= n;
  mean.telic_precision /= n;
  mean.non_telic_recall /= n;
  mean.non_telic_precision /= n;
  mean.accuracy /= n;
  mean.non_telic_f /= n;
  return mean;
}

}  // namespace

BatchReport run_batch(const CorpusIndex& index,
                      std::span<const std::uint32_t> labeled_ids,
                      const BatchConfig& config) {
  if (config.n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");

  const int jobs = std::max(1, config.jobs);
  std::vector<std::optional<RunRow>> rows(
      static_cast<std::size_t>(config.n_runs));
  std::vector<std::optional<std::string>> failures(rows.size());

  std::mutex progress_mutex;
  ProgressSink serialized_sink;
  if (config.progress) {
    serialized_sink = [&](const ProgressEvent& ev) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      config.progress(ev);
    };
  }

  if (jobs == 1) {
    for (int i = 0; i < config.n_runs; ++i) {
      try {
        rows[static_cast<std::size_t>(i)] =
            execute_run(index, labeled_ids, i, config, serialized_sink);
      } catch (const std::exception& e) {
        failures[static_cast<std::size_t>(i)] = e.what();
        break;
      }
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= config.n_runs) return;
        try {
          rows[static_cast<std::size_t>(i)] =
              execute_run(index, labeled_ids, i, config, serialized_sink);
        } catch (const std::exception& e) {
          failures[static_cast<std::size_t>(i)] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(jobs, config.n_runs);
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    std::vector<RunRow> completed;
    for (const auto& row : rows)
      if (row) completed.push_back(*row);
    const std::string message =
        "run " + std::to_string(i + 1) + " failed: " + *failures[i] + " (" +
        std::to_string(completed.size()) + " of " +
        std::to_string(config.n_runs) + " runs completed)";
    throw BatchError(message, std::move(completed));
  }

  BatchReport report;
  report.runs.reserve(rows.size());
  for (const auto& row : rows) report.runs.push_back(*row);
  report.mean = mean_of(report.runs);

  double telic_fraction = 0.0, mean_test = 0.0;
  for (const RunRow& r : report.runs) {
    telic_fraction += r.test_size
                          ? static_cast<double>(r.test_telic) /
                                static_cast<double>(r.test_size)
                          : 0.0;
    mean_test += static_cast<double>(r.test_size);
  }
  telic_fraction /= static_cast<double>(report.runs.size());
  mean_test /= static_cast<double>(report.runs.size());

  report.base_telic = telic_fraction;
  report.random_p = report.mean.non_telic_recall;
  report.baseline_a =
      baseline(BaselineSpec::all_telic(), telic_fraction, mean_test);
  report.baseline_b = baseline(BaselineSpec::random_fraction(report.random_p),
                               telic_fraction, mean_test);
  report.baseline_c = baseline(BaselineSpec::random_fraction(report.random_p),
                               telic_fraction, mean_test);
  return report;
}

namespace {

void append_row(std::string& out, const std::string& name,
                const MetricsRow& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s\t%.1f\t%.1f\t%.1f\t%.1f\t%.1f\t%.1f\n",
                name.c_str(), 100.0 * m.telic_recall,
                100.0 * m.telic_precision, 100.0 * m.non_telic_recall,
                100.0 * m.non_telic_precision, 100.0 * m.accuracy,
                100.0 * m.non_telic_f);
  out += buf;
}

}  // namespace

std::string render_report(const BatchReport& report) {
  std::string out =
      "run\ttelic_recall\ttelic_precision\tnon_telic_recall\t"
      "non_telic_precision\taccuracy\tnon_telic_f\n";
  for (const RunRow& r : report.runs)
    append_row(out, std::to_string(r.run), r.metrics);
  append_row(out, "mean", report.mean);
  append_row(out, "baseline_A", report.baseline_a);
  append_row(out, "baseline_B", report.baseline_b);
  append_row(out, "baseline_C", report.baseline_c);
  return out;
}

}  // namespace aspectgp
