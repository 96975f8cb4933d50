#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "aspectgp/clause.hpp"

namespace aspectgp {

/// Telic is the positive class throughout.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct MetricsRow {
  double telic_recall = 0.0;
  double telic_precision = 0.0;
  double non_telic_recall = 0.0;
  double non_telic_precision = 0.0;
  double accuracy = 0.0;
  double non_telic_f = 0.0;

  // set when a 0/0 ratio was resolved by convention
  // (precision -> 1.0 with zero predictions, recall -> 0.0 with zero gold)
  bool telic_recall_flagged = false;
  bool telic_precision_flagged = false;
  bool non_telic_recall_flagged = false;
  bool non_telic_precision_flagged = false;
};

MetricsRow metrics(const ConfusionMatrix& cm);

/// Shared core over real-valued counts; used by baseline() for expected
/// confusion matrices.
MetricsRow metrics_from_counts(double tp, double fp, double fn, double tn);

struct BaselineSpec {
  enum class Kind { AllTelic, RandomFraction };
  Kind kind = Kind::AllTelic;
  double p = 0.0;  // fraction classified NonTelic, RandomFraction only

  static BaselineSpec all_telic() { return {Kind::AllTelic, 0.0}; }
  static BaselineSpec random_fraction(double p) {
    return {Kind::RandomFraction, p};
  }
};

/// Expected metrics of an uninformed classifier over n clauses with telic
/// base rate base_telic, computed analytically.
MetricsRow baseline(const BaselineSpec& spec, double base_telic, double n);

/// One-sided exact binomial test: P[X >= successes] for
/// X ~ Binomial(n, p0), by direct summation with log-domain coefficients.
double binomial_test(std::uint64_t successes, std::uint64_t n, double p0);

struct SplitSpec {
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct SplitResult {
  std::vector<std::uint32_t> train_ids;  // ascending
  std::vector<std::uint32_t> test_ids;   // ascending
};

/// Seeded disjoint-exhaustive partition of the labeled pool. Stratified
/// mode shuffles each class separately and preserves the label ratio to
/// within one clause per stratum. labels[i] is the label of ids[i].
SplitResult split(std::span<const std::uint32_t> ids,
                  std::span<const AspectLabel> labels, const SplitSpec& spec);

}  // namespace aspectgp
