#include "aspectgp/evolve.hpp"

#include <stdexcept>

namespace aspectgp {

void GPConfig::validate() const {
  if (population_size < 2)
    throw std::invalid_argument("population_size must be >= 2");
  if (total_inserts < 0)
    throw std::invalid_argument("total_inserts must be >= 0");
  if (tournament_size < 1 || tournament_size > population_size)
    throw std::invalid_argument("tournament_size must be in [1, population_size]");
  if (max_nodes < 1) throw std::invalid_argument("max_nodes must be >= 1");
  if (init_depth_min < 1 || init_depth_max < init_depth_min)
    throw std::invalid_argument("init depth range must satisfy 1 <= min <= max");
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw std::invalid_argument("mutation_rate must be in [0, 1]");
}

std::string GPConfig::fingerprint() const {
  std::string s;
  s += "pop=" + std::to_string(population_size);
  s += ";inserts=" + std::to_string(total_inserts);
  s += ";tournament=" + std::to_string(tournament_size);
  s += ";max_nodes=" + std::to_string(max_nodes);
  s += ";depth=" + std::to_string(init_depth_min) + "-" +
       std::to_string(init_depth_max);
  s += ";mutation=" + std::to_string(mutation_rate);
  s += ";seed=" + std::to_string(seed);
  return s;
}

namespace {

void grow(Rng& rng, int depth_left, std::vector<Op>& out) {
  int kind;
  if (depth_left <= 1) {
    kind = kNumOperators + static_cast<int>(rng.below(kNumIndicators));
  } else {
    kind = static_cast<int>(rng.below(kNumKinds));
  }
  const Op op = static_cast<Op>(kind);
  out.push_back(op);
  for (int c = 0; c < arity(op); ++c) grow(rng, depth_left - 1, out);
}

ExprTree random_tree_depth(Rng& rng, int depth_min, int depth_max,
                           int max_nodes) {
  // oversize draws are rare at sane depth ranges; fall back to a bare
  // terminal if the cap keeps rejecting
  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::uint64_t span =
        static_cast<std::uint64_t>(depth_max) -
        static_cast<std::uint64_t>(depth_min) + 1;
    const int target = depth_min + static_cast<int>(rng.below(span));
    ExprTree tree;
    grow(rng, target, tree.code);
    if (tree.code.size() <= static_cast<std::size_t>(max_nodes)) return tree;
  }
  ExprTree tree;
  grow(rng, 1, tree.code);
  return tree;
}

// Uniformly chosen subtree span.
std::pair<std::size_t, std::size_t> pick_subtree(Rng& rng,
                                                 const ExprTree& tree) {
  const std::size_t start = rng.index(tree.code.size());
  return {start, subtree_end(tree.code, start)};
}

ExprTree splice(const ExprTree& host, std::size_t from, std::size_t to,
                std::span<const Op> replacement) {
  ExprTree out;
  out.code.reserve(host.code.size() - (to - from) + replacement.size());
  out.code.insert(out.code.end(), host.code.begin(),
                  host.code.begin() + static_cast<std::ptrdiff_t>(from));
  out.code.insert(out.code.end(), replacement.begin(), replacement.end());
  out.code.insert(out.code.end(),
                  host.code.begin() + static_cast<std::ptrdiff_t>(to),
                  host.code.end());
  return out;
}

}  // namespace

ExprTree random_tree(Rng& rng, const GPConfig& config) {
  return random_tree_depth(rng, config.init_depth_min, config.init_depth_max,
                           config.max_nodes);
}

ExprTree crossover(Rng& rng, const ExprTree& parent_a, const ExprTree& parent_b,
                   const GPConfig& config) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    const auto [a_from, a_to] = pick_subtree(rng, parent_a);
    const auto [b_from, b_to] = pick_subtree(rng, parent_b);
    ExprTree child = splice(
        parent_a, a_from, a_to,
        std::span(parent_b.code).subspan(b_from, b_to - b_from));
    if (child.code.size() <= static_cast<std::size_t>(config.max_nodes))
      return child;
  }
  return parent_a;
}

ExprTree mutate(Rng& rng, const ExprTree& tree, const GPConfig& config) {
  if (!rng.bernoulli(config.mutation_rate)) return tree;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const auto [from, to] = pick_subtree(rng, tree);
    const ExprTree fresh = random_tree_depth(rng, 1, 3, config.max_nodes);
    ExprTree out = splice(tree, from, to, fresh.code);
    if (out.code.size() <= static_cast<std::size_t>(config.max_nodes))
      return out;
  }
  return tree;
}

namespace {

std::size_t tournament_best(Rng& rng, const Population& pop, int rounds) {
  std::size_t winner = rng.index(pop.individuals.size());
  for (int i = 1; i < rounds; ++i) {
    const std::size_t c = rng.index(pop.individuals.size());
    if (pop.individuals[c].fitness > pop.individuals[winner].fitness ||
        (pop.individuals[c].fitness == pop.individuals[winner].fitness &&
         c < winner))
      winner = c;
  }
  return winner;
}

std::size_t tournament_worst(Rng& rng, const Population& pop, int rounds) {
  std::size_t loser = rng.index(pop.individuals.size());
  for (int i = 1; i < rounds; ++i) {
    const std::size_t c = rng.index(pop.individuals.size());
    if (pop.individuals[c].fitness < pop.individuals[loser].fitness ||
        (pop.individuals[c].fitness == pop.individuals[loser].fitness &&
         c < loser))
      loser = c;
  }
  return loser;
}

}  // namespace

EvolveResult evolve(Rng& rng, const FitnessFn& fitness_fn,
                    const GPConfig& config, const ProgressSink& progress_sink) {
  config.validate();

  Population pop;
  pop.individuals.reserve(static_cast<std::size_t>(config.population_size));
  for (int i = 0; i < config.population_size; ++i) {
    Individual ind;
    ind.tree = random_tree(rng, config);
    ind.fitness = fitness_fn(ind.tree);
    pop.individuals.push_back(std::move(ind));
  }
  pop.best_index = 0;
  for (std::size_t i = 1; i < pop.individuals.size(); ++i)
    if (pop.individuals[i].fitness > pop.individuals[pop.best_index].fitness)
      pop.best_index = i;

  EvolveResult result;
  result.best = pop.individuals[pop.best_index].tree;
  result.best_fitness = pop.individuals[pop.best_index].fitness;

  const int stride = std::max(1, config.total_inserts / 100);
  result.history.emplace_back(0, result.best_fitness);
  if (progress_sink) progress_sink({0, result.best_fitness, &pop});

  for (int insert = 1; insert <= config.total_inserts; ++insert) {
    const std::size_t pa = tournament_best(rng, pop, config.tournament_size);
    const std::size_t pb = tournament_best(rng, pop, config.tournament_size);

    ExprTree child = crossover(rng, pop.individuals[pa].tree,
                               pop.individuals[pb].tree, config);
    child = mutate(rng, child, config);
    const double child_fitness = fitness_fn(child);

    std::size_t victim = tournament_worst(rng, pop, config.tournament_size);
    while (victim == pop.best_index)
      victim = tournament_worst(rng, pop, config.tournament_size);

    pop.individuals[victim] = Individual{std::move(child), child_fitness};
    if (child_fitness > result.best_fitness) {
      result.best_fitness = child_fitness;
      result.best = pop.individuals[victim].tree;
      pop.best_index = victim;
    }

    if (insert % stride == 0 || insert == config.total_inserts)
      result.history.emplace_back(insert, result.best_fitness);
    if (progress_sink) progress_sink({insert, result.best_fitness, &pop});
  }

  return result;
}

}  // namespace aspectgp
