#include <benchmark/benchmark.h>

#include "aspectgp/classifier.hpp"
#include "aspectgp/index.hpp"
#include "aspectgp/rng.hpp"
#include "aspectgp/synth.hpp"

namespace {

using namespace aspectgp;

const Corpus& planted_corpus() {
  static const Corpus corpus = generate(default_planted_spec()).first;
  return corpus;
}

const CorpusIndex& planted_index() {
  static const CorpusIndex index(planted_corpus());
  return index;
}

ExprTree bench_tree() {
  return parse_tree("(if AM (mul (add NP NPT) SP) (sub (add SP SP) PPP))");
}

void BM_BuildIndex(benchmark::State& state) {
  const Corpus& corpus = planted_corpus();
  for (auto _ : state) {
    CorpusIndex index(corpus);
    benchmark::DoNotOptimize(index.query_count());
  }
}
BENCHMARK(BM_BuildIndex)->Unit(benchmark::kMillisecond);

void BM_RetrieveSimilar(benchmark::State& state) {
  const CorpusIndex& index = planted_index();
  const SimilarityConfig config{static_cast<int>(state.range(0)), true};
  std::size_t i = 0;
  for (auto _ : state) {
    const ClauseRecord& clause = planted_corpus().records[i];
    i = (i + 17) % planted_corpus().size();
    benchmark::DoNotOptimize(
        index.retrieve_similar(clause.key, config, clause.id));
  }
}
BENCHMARK(BM_RetrieveSimilar)->Arg(10)->Arg(100);

void BM_Featurize(benchmark::State& state) {
  const CorpusIndex& index = planted_index();
  const SimilarityConfig config{100, true};
  std::size_t i = 0;
  for (auto _ : state) {
    const ClauseRecord& clause = planted_corpus().records[i];
    i = (i + 31) % planted_corpus().size();
    benchmark::DoNotOptimize(featurize(index, clause, config));
  }
}
BENCHMARK(BM_Featurize);

void BM_EvalTree(benchmark::State& state) {
  const ExprTree tree = bench_tree();
  std::uint8_t pattern = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        eval_tree(tree, IndicatorBits::unpack(pattern)));
    pattern = (pattern + 1) & 31;
  }
}
BENCHMARK(BM_EvalTree);

void BM_Score100(benchmark::State& state) {
  const ExprTree tree = bench_tree();
  Rng rng(5);
  FeatureMatrix fm;
  for (int i = 0; i < 100; ++i)
    fm.rows.push_back(static_cast<std::uint8_t>(rng.below(32)));
  for (auto _ : state) benchmark::DoNotOptimize(score(tree, fm));
}
BENCHMARK(BM_Score100);

void BM_Fitness200(benchmark::State& state) {
  const CorpusIndex& index = planted_index();
  std::vector<std::uint32_t> labeled = planted_corpus().labeled_event_ids();
  labeled.resize(200);
  const TrainingSet cache =
      build_training_set(index, labeled, SimilarityConfig{100, true});
  const FitnessFn fitness = make_fitness(cache, Objective::Accuracy);
  const ExprTree tree = bench_tree();
  for (auto _ : state) benchmark::DoNotOptimize(fitness(tree));
}
BENCHMARK(BM_Fitness200);

void BM_CalibrateThreshold(benchmark::State& state) {
  Rng rng(9);
  std::vector<std::pair<std::int64_t, AspectLabel>> scored;
  for (int i = 0; i < 200; ++i)
    scored.emplace_back(static_cast<std::int64_t>(rng.below(60)),
                        rng.bernoulli(0.66) ? AspectLabel::Telic
                                            : AspectLabel::NonTelic);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        calibrate_threshold(scored, Objective::NonTelicFMeasure));
}
BENCHMARK(BM_CalibrateThreshold);

}  // namespace

BENCHMARK_MAIN();
