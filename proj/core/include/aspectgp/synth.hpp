#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aspectgp/corpus.hpp"

namespace aspectgp {

/// Class-conditional morphology distribution.
struct ClassMorphology {
  double p_progressive = 0.0;
  double p_perfect = 0.0;
  std::array<double, 6> tense_dist{};  // indexed by TenseForm, sums to 1
};

struct GenSpec {
  std::size_t n_clauses = 5000;
  std::size_t n_key_clusters = 60;
  double telic_fraction = 0.68;
  double cluster_purity = 0.9;
  ClassMorphology telic;
  ClassMorphology non_telic;
  std::array<std::size_t, kNumSlots> vocab_sizes{8, 6, 30, 8, 8};
  std::uint64_t seed = 42;

  void validate() const;
};

struct ClassIndicatorRates {
  double not_progressive = 0.0;
  double special_perfect = 0.0;
  double not_pres_tense = 0.0;
  double past_pres_participle = 0.0;
};

struct GenReport {
  std::size_t telic_count = 0;
  std::size_t non_telic_count = 0;
  ClassIndicatorRates telic_rates;
  ClassIndicatorRates non_telic_rates;
  std::vector<std::size_t> cluster_sizes;
};

/// Labeled synthetic corpus: clusters share exact constituent keys; each
/// clause takes its cluster's majority label with probability
/// cluster_purity and draws morphology from its class's distribution.
/// Fully determined by spec.seed.
std::pair<Corpus, GenReport> generate(const GenSpec& spec);

/// Planted-signal defaults: a telic/non-telic contrast in perfect and
/// progressive rates strong enough to validate the whole pipeline at desk
/// scale.
GenSpec default_planted_spec();

/// JSON (de)serialization; absent fields fall back to the planted defaults.
GenSpec genspec_from_json(const std::string& text);
std::string genspec_to_json(const GenSpec& spec);
std::string genreport_to_json(const GenReport& report);

}  // namespace aspectgp
