#include "aspectgp/index.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace aspectgp {

namespace {

// Length-prefixed encoding of the non-wildcard slots; unambiguous for any
// token bytes. Maps are per-mask, so masks never share key strings.
std::string masked_key(const ConstituentKey& key, std::uint8_t mask) {
  std::string out;
  for (int i = 0; i < kNumSlots; ++i) {
    if (mask & (1u << i)) continue;
    const auto& slot = key.slots[i];
    if (!slot) {
      out += '-';
    } else {
      out += std::to_string(slot->size());
      out += ':';
      out += *slot;
    }
  }
  return out;
}

}  // namespace

CorpusIndex::CorpusIndex(const Corpus& corpus) : corpus_(&corpus) {
  for (const auto& rec : corpus.records) {
    for (int mask = 0; mask < kNumMasks; ++mask) {
      maps_[mask][masked_key(rec.key, static_cast<std::uint8_t>(mask))]
          .push_back(rec.id);
    }
  }
  // insertion is in id order, so every posting list is ascending
}

std::span<const std::uint32_t> CorpusIndex::lookup(
    std::uint8_t mask, const ConstituentKey& input_key) const {
  const auto& m = maps_[mask];
  auto it = m.find(masked_key(input_key, mask));
  if (it == m.end()) return {};
  return it->second;
}

SimilarSet CorpusIndex::retrieve_similar(
    const ConstituentKey& input_key, const SimilarityConfig& config,
    std::optional<std::uint32_t> self_id) const {
  if (config.k < 1) throw std::invalid_argument("similarity k must be >= 1");
  queries_.fetch_add(1, std::memory_order_relaxed);

  SimilarSet out;
  out.input_key = input_key;
  out.level_reached = 5;

  std::vector<bool> seen(corpus_->size(), false);
  const bool skip_self = config.exclude_self && self_id.has_value();
  const std::size_t want = static_cast<std::size_t>(config.k);

  std::vector<std::uint32_t> level_ids;
  for (int level = 0; level <= 5; ++level) {
    level_ids.clear();
    for (int mask = 0; mask < kNumMasks; ++mask) {
      if (mask_level(static_cast<std::uint8_t>(mask)) != level) continue;
      for (std::uint32_t id : lookup(static_cast<std::uint8_t>(mask), input_key)) {
        if (seen[id]) continue;
        if (skip_self && id == *self_id) continue;
        seen[id] = true;
        level_ids.push_back(id);
      }
    }
    std::sort(level_ids.begin(), level_ids.end());
    out.member_ids.insert(out.member_ids.end(), level_ids.begin(),
                          level_ids.end());
    if (out.member_ids.size() >= want) {
      out.level_reached = level;
      break;
    }
  }

  if (out.member_ids.size() > want) out.member_ids.resize(want);
  for (std::uint32_t id : out.member_ids)
    if (corpus_->records[id].key == input_key) ++out.exact_count;
  return out;
}

FrequencyTable frequency_table(const CorpusIndex& index,
                               std::span<const std::uint32_t> labeled_ids,
                               const SimilarityConfig& config) {
  FrequencyTable table;
  const Corpus& corpus = index.corpus();

  for (std::uint32_t id : labeled_ids) {
    const ClauseRecord& clause = corpus.records.at(id);
    if (clause.label != AspectLabel::Telic &&
        clause.label != AspectLabel::NonTelic)
      continue;

    SimilarSet sim = index.retrieve_similar(clause.key, config, clause.id);
    if (sim.member_ids.empty()) continue;

    std::array<std::size_t, kNumIndicators> counts{};
    for (std::uint32_t member : sim.member_ids) {
      IndicatorBits bits =
          extract_indicators(corpus.records[member], clause.key);
      for (int i = 0; i < kNumIndicators; ++i) counts[i] += bits.bit(i);
    }

    auto& acc = clause.label == AspectLabel::Telic ? table.telic_pct
                                                   : table.non_telic_pct;
    auto& n = clause.label == AspectLabel::Telic ? table.telic_inputs
                                                 : table.non_telic_inputs;
    for (int i = 0; i < kNumIndicators; ++i)
      acc[i] += 100.0 * static_cast<double>(counts[i]) /
                static_cast<double>(sim.member_ids.size());
    ++n;
  }

  if (table.telic_inputs + table.non_telic_inputs == 0)
    throw std::invalid_argument("no labeled clauses");

  for (int i = 0; i < kNumIndicators; ++i) {
    if (table.telic_inputs)
      table.telic_pct[i] /= static_cast<double>(table.telic_inputs);
    if (table.non_telic_inputs)
      table.non_telic_pct[i] /= static_cast<double>(table.non_telic_inputs);
  }
  return table;
}

}  // namespace aspectgp
