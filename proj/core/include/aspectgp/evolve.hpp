#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "aspectgp/expr.hpp"
#include "aspectgp/rng.hpp"

namespace aspectgp {

struct GPConfig {
  int population_size = 500;
  int total_inserts = 10000;
  int tournament_size = 4;
  int max_nodes = 256;
  int init_depth_min = 2;
  int init_depth_max = 6;
  double mutation_rate = 0.0;
  std::uint64_t seed = 42;

  void validate() const;
  std::string fingerprint() const;
};

struct Individual {
  ExprTree tree;
  double fitness = 0.0;
};

struct Population {
  std::vector<Individual> individuals;
  std::size_t best_index = 0;  // never selected for replacement
};

struct ProgressEvent {
  int insert_count = 0;  // 0 after initialization
  double best_fitness = 0.0;
  const Population* population = nullptr;
};

using FitnessFn = std::function<double(const ExprTree&)>;
using ProgressSink = std::function<void(const ProgressEvent&)>;

struct EvolveResult {
  ExprTree best;
  double best_fitness = 0.0;
  std::vector<std::pair<int, double>> history;  // (insert_count, best_fitness)
};

/// Grow-style random tree. Target depth is uniform over the configured
/// init range; node kinds are uniform over the legal choices at each
/// position (all eleven away from the depth bound, terminals only at it).
ExprTree random_tree(Rng& rng, const GPConfig& config);

/// Copy of parent_a with one uniformly chosen subtree replaced by a
/// uniformly chosen subtree of parent_b. Oversized offspring are redrawn
/// up to ten times, then parent_a is returned unchanged.
ExprTree crossover(Rng& rng, const ExprTree& parent_a, const ExprTree& parent_b,
                   const GPConfig& config);

/// With probability mutation_rate, replaces one uniformly chosen subtree
/// with a fresh random tree of depth at most 3; size handled as in
/// crossover.
ExprTree mutate(Rng& rng, const ExprTree& tree, const GPConfig& config);

/// Steady-state loop: tournament parent selection, crossover + mutation,
/// anti-tournament replacement protected by elitism. Deterministic for a
/// given rng seed; progress_sink (optional) fires after initialization and
/// after every insert.
EvolveResult evolve(Rng& rng, const FitnessFn& fitness_fn,
                    const GPConfig& config,
                    const ProgressSink& progress_sink = nullptr);

}  // namespace aspectgp
