#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aspectgp/evolve.hpp"
#include "aspectgp/expr.hpp"
#include "aspectgp/index.hpp"
#include "aspectgp/metrics.hpp"

namespace aspectgp {

enum class Objective : std::uint8_t { Accuracy, NonTelicFMeasure };

std::string_view objective_name(Objective o);
std::optional<Objective> parse_objective(std::string_view s);

/// Indicator rows of one clause's similar set, in member order, packed
/// with IndicatorBits::pack().
struct FeatureMatrix {
  std::uint32_t clause_id = 0;
  std::vector<std::uint8_t> rows;
  int level_reached = 5;

  IndicatorBits row_bits(std::size_t i) const {
    return IndicatorBits::unpack(rows[i]);
  }
};

/// Retrieves the clause's similar set and extracts the indicators of each
/// member against the clause's own key. clause.id is excluded from the
/// set when config.exclude_self holds.
FeatureMatrix featurize(const CorpusIndex& index, const ClauseRecord& clause,
                        const SimilarityConfig& config);

/// Saturating sum of per-row tree evaluations, in member order. Empty
/// matrix scores 0.
std::int64_t score(const ExprTree& tree, const FeatureMatrix& fm);

struct CalibrationResult {
  double threshold = 0.0;        // may be +-infinity
  double objective_value = 0.0;
  bool degenerate = false;       // F requested with no non-telic mass at all
};

/// Exhaustive threshold selection. Candidates are -inf, +inf and the
/// midpoints between consecutive distinct scores; the decision rule is
/// score > threshold -> Telic; ties on the objective resolve to the
/// smallest threshold.
CalibrationResult calibrate_threshold(
    std::span<const std::pair<std::int64_t, AspectLabel>> scored,
    Objective objective);

/// Feature cache for one training set; built once, then reused by every
/// fitness evaluation.
struct TrainingSet {
  std::vector<FeatureMatrix> features;
  std::vector<AspectLabel> labels;
};

TrainingSet build_training_set(const CorpusIndex& index,
                               std::span<const std::uint32_t> training_ids,
                               const SimilarityConfig& config);

/// Fitness over the cached features: score every training clause,
/// calibrate a threshold, return the achieved objective. Performs no
/// index queries.
FitnessFn make_fitness(const TrainingSet& cache, Objective objective);

struct ClassifierModel {
  ExprTree tree;
  double threshold = 0.0;
  Objective objective = Objective::Accuracy;
  SimilarityConfig similarity;
  std::uint64_t gp_seed = 0;
  std::string gp_fingerprint;
  std::size_t trained_on = 0;
  double training_objective_value = 0.0;
};

struct TrainReport {
  ClassifierModel model;
  std::vector<std::pair<int, double>> history;
  std::chrono::milliseconds elapsed{0};
  std::size_t training_set_size = 0;
};

struct TrainOptions {
  Objective objective = Objective::Accuracy;
  GPConfig gp;
  SimilarityConfig similarity;
  ProgressSink progress;
};

/// Full training pass: featurize the training clauses once, evolve against
/// the cached fitness, then recalibrate the best tree's threshold on the
/// whole training set. Throws on fewer than two clauses or a single class.
TrainReport train(const CorpusIndex& index,
                  std::span<const std::uint32_t> training_ids,
                  const TrainOptions& options);

/// Telic iff score strictly exceeds the model threshold.
std::pair<AspectLabel, std::int64_t> classify(const ClassifierModel& model,
                                              const CorpusIndex& index,
                                              const ClauseRecord& clause);

std::string model_to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const std::string& text);
void save_model(const ClassifierModel& model, const std::string& path);
ClassifierModel load_model(const std::string& path);

}  // namespace aspectgp
