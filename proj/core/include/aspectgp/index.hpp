#pragma once

#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aspectgp/clause.hpp"
#include "aspectgp/corpus.hpp"

namespace aspectgp {

constexpr int kNumMasks = 32;  // all subsets of the five slots

/// Bit i set means slot i is a wildcard and matches anything.
inline int mask_level(std::uint8_t mask) { return std::popcount(mask); }

struct SimilarityConfig {
  int k = 100;
  bool exclude_self = true;
};

struct SimilarSet {
  ConstituentKey input_key;
  std::vector<std::uint32_t> member_ids;
  int level_reached = 5;   // wildcard count at which the search stopped
  int exact_count = 0;     // members whose key equals input_key on all slots
};

/// Immutable retrieval index: one exact-match map per wildcard mask, from
/// masked key to the ascending id list of matching clauses. Safe for
/// concurrent lookups once built.
class CorpusIndex {
 public:
  explicit CorpusIndex(const Corpus& corpus);

  const Corpus& corpus() const { return *corpus_; }

  /// Fewest-wildcards-first retrieval. Accumulates matches level by level
  /// (union across all masks of the level, deduplicated) and stops at the
  /// first level where at least k members are collected, truncating to k
  /// with lower-level members first and ascending ids within a level.
  /// When self_id is given and config.exclude_self is set, that clause is
  /// ineligible.
  SimilarSet retrieve_similar(const ConstituentKey& input_key,
                              const SimilarityConfig& config,
                              std::optional<std::uint32_t> self_id = {}) const;

  /// Ids matching input_key under one mask, ascending. Empty when absent.
  std::span<const std::uint32_t> lookup(std::uint8_t mask,
                                        const ConstituentKey& input_key) const;

  /// Number of retrieve_similar calls served so far.
  std::uint64_t query_count() const { return queries_.load(); }

 private:
  const Corpus* corpus_;
  std::array<std::unordered_map<std::string, std::vector<std::uint32_t>>,
             kNumMasks>
      maps_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

/// Per-class mean indicator percentages over the similar sets of the
/// given labeled clauses.
struct FrequencyTable {
  std::array<double, kNumIndicators> telic_pct{};
  std::array<double, kNumIndicators> non_telic_pct{};
  std::size_t telic_inputs = 0;
  std::size_t non_telic_inputs = 0;
};

/// labeled_ids must reference corpus records labeled Telic or NonTelic;
/// other labels are ignored. Throws std::invalid_argument when no usable
/// clause remains.
FrequencyTable frequency_table(const CorpusIndex& index,
                               std::span<const std::uint32_t> labeled_ids,
                               const SimilarityConfig& config);

}  // namespace aspectgp
