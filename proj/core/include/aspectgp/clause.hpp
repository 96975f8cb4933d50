#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aspectgp {

enum class AspectLabel : std::uint8_t { Telic, NonTelic, State, Unknown };

enum class TenseForm : std::uint8_t {
  Present,
  Past,
  PresentParticiple,
  PastParticiple,
  Future,
  Other,
};

constexpr int kNumSlots = 5;

/// The five constituents a clause is keyed on, in fixed slot order:
/// 0 adjunct preposition, 1 object determiner, 2 verb, 3 particle,
/// 4 complement preposition. An absent constituent is nullopt; an empty
/// string never occurs in a normalized key.
struct ConstituentKey {
  std::array<std::optional<std::string>, kNumSlots> slots;

  std::optional<std::string>& adjunct_preposition() { return slots[0]; }
  std::optional<std::string>& object_determiner() { return slots[1]; }
  std::optional<std::string>& verb() { return slots[2]; }
  std::optional<std::string>& particle() { return slots[3]; }
  std::optional<std::string>& complement_preposition() { return slots[4]; }
  const std::optional<std::string>& slot(int i) const { return slots[i]; }

  bool operator==(const ConstituentKey&) const = default;
};

extern const std::array<std::string_view, kNumSlots> kSlotNames;

struct ClauseRecord {
  std::uint32_t id = 0;  // 0-based corpus position
  ConstituentKey key;
  TenseForm tense = TenseForm::Other;
  bool progressive = false;
  bool perfect = false;
  AspectLabel label = AspectLabel::Unknown;
  std::optional<std::string> source_text;
};

/// The five aspectual indicators evaluated on one similar clause.
struct IndicatorBits {
  bool not_progressive = false;
  bool special_perfect = false;
  bool all_match = false;
  bool not_pres_tense = false;
  bool past_pres_participle = false;

  bool bit(int i) const {
    switch (i) {
      case 0: return not_progressive;
      case 1: return special_perfect;
      case 2: return all_match;
      case 3: return not_pres_tense;
      default: return past_pres_participle;
    }
  }

  /// Packs the five bits into 0..31 (bit i = indicator i).
  std::uint8_t pack() const {
    return static_cast<std::uint8_t>(not_progressive | special_perfect << 1 |
                                     all_match << 2 | not_pres_tense << 3 |
                                     past_pres_participle << 4);
  }

  static IndicatorBits unpack(std::uint8_t code) {
    return IndicatorBits{(code & 1) != 0,  (code & 2) != 0, (code & 4) != 0,
                         (code & 8) != 0, (code & 16) != 0};
  }

  bool operator==(const IndicatorBits&) const = default;
};

constexpr int kNumIndicators = 5;
extern const std::array<std::string_view, kNumIndicators> kIndicatorNames;

/// Evaluates the five indicators for a similar clause against the key of
/// the clause being classified. Total and pure.
IndicatorBits extract_indicators(const ClauseRecord& similar,
                                 const ConstituentKey& input_key);

/// One record as decoded from the wire format, before normalization.
/// Morphology flags travel as strings so that type errors surface as
/// field-level validation errors rather than decode failures.
struct RawRecord {
  std::array<std::optional<std::string>, kNumSlots> slots;
  std::optional<std::string> tense;
  std::optional<std::string> progressive;
  std::optional<std::string> perfect;
  std::optional<std::string> label;
  std::optional<std::string> text;
};

/// Normalizes a raw record: lowercases tokens, maps empty/missing
/// constituents to absent, decodes enums. Returns the record, or nullopt
/// with one message per offending field appended to errors.
std::optional<ClauseRecord> validate_record(const RawRecord& raw,
                                            std::vector<std::string>& errors);

/// Inverse of validate_record on normalized records.
RawRecord encode_record(const ClauseRecord& rec);

std::optional<TenseForm> parse_tense(std::string_view s);
std::string_view tense_name(TenseForm t);
std::optional<AspectLabel> parse_label(std::string_view s);
std::string_view label_name(AspectLabel l);

}  // namespace aspectgp
