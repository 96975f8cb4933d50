#include "aspectgp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aspectgp/rng.hpp"

namespace aspectgp {

MetricsRow metrics_from_counts(double tp, double fp, double fn, double tn) {
  const double n = tp + fp + fn + tn;
  if (n <= 0.0) throw std::invalid_argument("empty confusion matrix");

  MetricsRow row;
  if (tp + fn > 0.0) {
    row.telic_recall = tp / (tp + fn);
  } else {
    row.telic_recall = 0.0;
    row.telic_recall_flagged = true;
  }
  if (tp + fp > 0.0) {
    row.telic_precision = tp / (tp + fp);
  } else {
    row.telic_precision = 1.0;
    row.telic_precision_flagged = true;
  }
  if (tn + fp > 0.0) {
    row.non_telic_recall = tn / (tn + fp);
  } else {
    row.non_telic_recall = 0.0;
    row.non_telic_recall_flagged = true;
  }
  if (tn + fn > 0.0) {
    row.non_telic_precision = tn / (tn + fn);
  } else {
    row.non_telic_precision = 1.0;
    row.non_telic_precision_flagged = true;
  }
  row.accuracy = (tp + tn) / n;

  const double p = row.non_telic_precision;
  const double r = row.non_telic_recall;
  row.non_telic_f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  return row;
}

MetricsRow metrics(const ConfusionMatrix& cm) {
  return metrics_from_counts(static_cast<double>(cm.tp),
                             static_cast<double>(cm.fp),
                             static_cast<double>(cm.fn),
                             static_cast<double>(cm.tn));
}

MetricsRow baseline(const BaselineSpec& spec, double base_telic, double n) {
  if (base_telic < 0.0 || base_telic > 1.0)
    throw std::invalid_argument("base_telic must be in [0, 1]");
  // fraction of clauses classified NonTelic, independent of the gold label
  const double p = spec.kind == BaselineSpec::Kind::AllTelic ? 0.0 : spec.p;
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("random fraction must be in [0, 1]");

  const double tp = n * base_telic * (1.0 - p);
  const double fn = n * base_telic * p;
  const double tn = n * (1.0 - base_telic) * p;
  const double fp = n * (1.0 - base_telic) * (1.0 - p);
  return metrics_from_counts(tp, fp, fn, tn);
}

double binomial_test(std::uint64_t successes, std::uint64_t n, double p0) {
  if (n == 0) throw std::invalid_argument("binomial test requires n >= 1");
  if (successes > n)
    throw std::invalid_argument("successes must not exceed n");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw std::invalid_argument("p0 must be in (0, 1)");

  if (successes == 0) return 1.0;
  if (successes == n) return std::pow(p0, static_cast<double>(n));

  const double log_p = std::log(p0);
  const double log_q = std::log1p(-p0);
  const double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);

  // descending accumulation keeps P[X >= s] monotone in s exactly
  double sum = 0.0;
  for (std::uint64_t k = n;; --k) {
    const double dk = static_cast<double>(k);
    const double log_choose = lg_n1 - std::lgamma(dk + 1.0) -
                              std::lgamma(static_cast<double>(n - k) + 1.0);
    sum += std::exp(log_choose + dk * log_p +
                    static_cast<double>(n - k) * log_q);
    if (k == successes) break;
  }
  return std::min(sum, 1.0);
}

namespace {

std::size_t train_count(std::size_t stratum, double fraction) {
  const double exact = static_cast<double>(stratum) * fraction;
  return static_cast<std::size_t>(std::floor(exact + 0.5));
}

}  // namespace

SplitResult split(std::span<const std::uint32_t> ids,
                  std::span<const AspectLabel> labels, const SplitSpec& spec) {
  if (ids.size() != labels.size())
    throw std::invalid_argument("ids and labels must align");
  if (ids.size() < 2)
    throw std::invalid_argument("split requires at least 2 labeled clauses");
  if (spec.train_fraction < 0.0 || spec.train_fraction > 1.0)
    throw std::invalid_argument("train_fraction must be in [0, 1]");

  Rng rng(spec.seed);
  SplitResult out;

  auto take = [&](std::vector<std::uint32_t> pool) {
    rng.shuffle(pool);
    const std::size_t n_train = train_count(pool.size(), spec.train_fraction);
    out.train_ids.insert(out.train_ids.end(), pool.begin(),
                         pool.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_ids.insert(out.test_ids.end(),
                        pool.begin() + static_cast<std::ptrdiff_t>(n_train),
                        pool.end());
  };

  if (spec.stratified) {
    std::vector<std::uint32_t> telic, non_telic;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (labels[i] == AspectLabel::Telic) telic.push_back(ids[i]);
      else if (labels[i] == AspectLabel::NonTelic) non_telic.push_back(ids[i]);
      else throw std::invalid_argument("split expects Telic/NonTelic labels");
    }
    if (telic.empty() || non_telic.empty())
      throw std::invalid_argument("stratified split requires both classes");
    take(std::move(telic));
    take(std::move(non_telic));
  } else {
    take(std::vector<std::uint32_t>(ids.begin(), ids.end()));
  }

  std::sort(out.train_ids.begin(), out.train_ids.end());
  std::sort(out.test_ids.begin(), out.test_ids.end());
  return out;
}

}  // namespace aspectgp
