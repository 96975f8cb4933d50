#include "aspectgp/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace aspectgp {

using nlohmann::json;

std::string_view objective_name(Objective o) {
  return o == Objective::Accuracy ? "accuracy" : "non_telic_f";
}

std::optional<Objective> parse_objective(std::string_view s) {
  if (s == "accuracy") return Objective::Accuracy;
  if (s == "non_telic_f") return Objective::NonTelicFMeasure;
  return std::nullopt;
}

FeatureMatrix featurize(const CorpusIndex& index, const ClauseRecord& clause,
                        const SimilarityConfig& config) {
  FeatureMatrix fm;
  fm.clause_id = clause.id;

  SimilarSet sim = index.retrieve_similar(clause.key, config, clause.id);
  fm.level_reached = sim.level_reached;
  fm.rows.reserve(sim.member_ids.size());
  for (std::uint32_t member : sim.member_ids)
    fm.rows.push_back(
        extract_indicators(index.corpus().records[member], clause.key).pack());
  return fm;
}

std::int64_t score(const ExprTree& tree, const FeatureMatrix& fm) {
  const auto table = eval_all_patterns(tree);
  std::int64_t total = 0;
  for (std::uint8_t row : fm.rows) total = sat_add(total, table[row]);
  return total;
}

namespace {

double objective_of(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                    std::uint64_t tn, Objective objective, bool* degenerate) {
  const MetricsRow row = metrics(ConfusionMatrix{tp, fp, fn, tn});
  if (objective == Objective::Accuracy) {
    if (degenerate) *degenerate = false;
    return row.accuracy;
  }
  if (degenerate)
    *degenerate = row.non_telic_recall_flagged && row.non_telic_precision_flagged;
  return row.non_telic_f;
}

}  // namespace

CalibrationResult calibrate_threshold(
    std::span<const std::pair<std::int64_t, AspectLabel>> scored,
    Objective objective) {
  if (scored.empty())
    throw std::invalid_argument("calibrate_threshold requires scores");

  std::vector<std::pair<std::int64_t, bool>> items;  // (score, is_telic)
  items.reserve(scored.size());
  for (const auto& [s, label] : scored) {
    if (label != AspectLabel::Telic && label != AspectLabel::NonTelic)
      throw std::invalid_argument("calibration labels must be Telic/NonTelic");
    items.emplace_back(s, label == AspectLabel::Telic);
  }
  std::sort(items.begin(), items.end());

  std::uint64_t telic_total = 0;
  for (const auto& [s, t] : items) telic_total += t;
  const std::uint64_t non_telic_total = items.size() - telic_total;

  // cut 0 = -inf (everything Telic); advance over distinct scores
  std::uint64_t tp = telic_total, fp = non_telic_total, fn = 0, tn = 0;

  CalibrationResult best;
  best.threshold = -std::numeric_limits<double>::infinity();
  best.objective_value =
      objective_of(tp, fp, fn, tn, objective, &best.degenerate);

  std::size_t i = 0;
  while (i < items.size()) {
    const std::int64_t value = items[i].first;
    while (i < items.size() && items[i].first == value) {
      if (items[i].second) { --tp; ++fn; } else { --fp; ++tn; }
      ++i;
    }
    const double theta =
        i < items.size()
            ? static_cast<double>(value) / 2.0 +
                  static_cast<double>(items[i].first) / 2.0
            : std::numeric_limits<double>::infinity();
    bool degenerate = false;
    const double v = objective_of(tp, fp, fn, tn, objective, &degenerate);
    if (v > best.objective_value) {
      best.threshold = theta;
      best.objective_value = v;
      best.degenerate = degenerate;
    }
  }
  return best;
}

TrainingSet build_training_set(const CorpusIndex& index,
                               std::span<const std::uint32_t> training_ids,
                               const SimilarityConfig& config) {
  TrainingSet set;
  set.features.reserve(training_ids.size());
  set.labels.reserve(training_ids.size());
  for (std::uint32_t id : training_ids) {
    const ClauseRecord& clause = index.corpus().records.at(id);
    set.features.push_back(featurize(index, clause, config));
    set.labels.push_back(clause.label);
  }
  return set;
}

FitnessFn make_fitness(const TrainingSet& cache, Objective objective) {
  const TrainingSet* set = &cache;
  return [set, objective](const ExprTree& tree) {
    const auto table = eval_all_patterns(tree);
    std::vector<std::pair<std::int64_t, AspectLabel>> scored;
    scored.reserve(set->features.size());
    for (std::size_t i = 0; i < set->features.size(); ++i) {
      std::int64_t total = 0;
      for (std::uint8_t row : set->features[i].rows)
        total = sat_add(total, table[row]);
      scored.emplace_back(total, set->labels[i]);
    }
    return calibrate_threshold(scored, objective).objective_value;
  };
}

TrainReport train(const CorpusIndex& index,
                  std::span<const std::uint32_t> training_ids,
                  const TrainOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  options.gp.validate();

  if (training_ids.size() < 2)
    throw std::runtime_error("degenerate training set: fewer than 2 clauses");
  bool any_telic = false, any_non_telic = false;
  for (std::uint32_t id : training_ids) {
    const AspectLabel label = index.corpus().records.at(id).label;
    if (label == AspectLabel::Telic) any_telic = true;
    else if (label == AspectLabel::NonTelic) any_non_telic = true;
    else throw std::runtime_error("degenerate training set: unlabeled clause");
  }
  if (!any_telic || !any_non_telic)
    throw std::runtime_error("degenerate training set: single class");

  TrainingSet cache = build_training_set(index, training_ids, options.similarity);
  const FitnessFn fitness = make_fitness(cache, options.objective);

  Rng rng(options.gp.seed);
  EvolveResult evolved = evolve(rng, fitness, options.gp, options.progress);

  // final threshold is recalibrated on the full training set so the stored
  // value matches the stored objective
  std::vector<std::pair<std::int64_t, AspectLabel>> scored;
  scored.reserve(cache.features.size());
  for (std::size_t i = 0; i < cache.features.size(); ++i)
    scored.emplace_back(score(evolved.best, cache.features[i]),
                        cache.labels[i]);
  const CalibrationResult cal = calibrate_threshold(scored, options.objective);

  TrainReport report;
  report.model.tree = std::move(evolved.best);
  report.model.threshold = cal.threshold;
  report.model.objective = options.objective;
  report.model.similarity = options.similarity;
  report.model.gp_seed = options.gp.seed;
  report.model.gp_fingerprint = options.gp.fingerprint();
  report.model.trained_on = training_ids.size();
  report.model.training_objective_value = cal.objective_value;
  report.history = std::move(evolved.history);
  report.training_set_size = training_ids.size();
  report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

std::pair<AspectLabel, std::int64_t> classify(const ClassifierModel& model,
                                              const CorpusIndex& index,
                                              const ClauseRecord& clause) {
  const FeatureMatrix fm = featurize(index, clause, model.similarity);
  const std::int64_t s = score(model.tree, fm);
  const AspectLabel label = static_cast<double>(s) > model.threshold
                                ? AspectLabel::Telic
                                : AspectLabel::NonTelic;
  return {label, s};
}

std::string model_to_json(const ClassifierModel& model) {
  json obj;
  obj["tree"] = print_tree(model.tree);
  if (std::isinf(model.threshold)) {
    obj["threshold"] = model.threshold > 0 ? "+inf" : "-inf";
  } else {
    obj["threshold"] = model.threshold;
  }
  obj["objective"] = std::string(objective_name(model.objective));
  obj["k"] = model.similarity.k;
  obj["seed"] = model.gp_seed;
  obj["trained_on"] = model.trained_on;
  obj["objective_value"] = model.training_objective_value;
  return obj.dump();
}

ClassifierModel model_from_json(const std::string& text) {
  const json obj = json::parse(text);
  ClassifierModel model;
  model.tree = parse_tree(obj.at("tree").get<std::string>());
  const auto& th = obj.at("threshold");
  if (th.is_string()) {
    const std::string s = th.get<std::string>();
    if (s == "+inf") model.threshold = std::numeric_limits<double>::infinity();
    else if (s == "-inf")
      model.threshold = -std::numeric_limits<double>::infinity();
    else throw std::invalid_argument("bad threshold string: " + s);
  } else {
    model.threshold = th.get<double>();
  }
  const auto objective = parse_objective(obj.at("objective").get<std::string>());
  if (!objective) throw std::invalid_argument("unknown objective in model");
  model.objective = *objective;
  model.similarity.k = obj.at("k").get<int>();
  model.gp_seed = obj.at("seed").get<std::uint64_t>();
  model.trained_on = obj.at("trained_on").get<std::size_t>();
  model.training_objective_value = obj.at("objective_value").get<double>();
  return model;
}

void save_model(const ClassifierModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open model file: " + path);
  out << model_to_json(model) << '\n';
}

ClassifierModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace aspectgp
