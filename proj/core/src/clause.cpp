#include "aspectgp/clause.hpp"

#include <algorithm>
#include <cctype>

namespace aspectgp {

const std::array<std::string_view, kNumSlots> kSlotNames = {
    "adjunct_preposition", "object_determiner", "verb", "particle",
    "complement_preposition"};

const std::array<std::string_view, kNumIndicators> kIndicatorNames = {
    "not_progressive", "special_perfect", "all_match", "not_pres_tense",
    "past_pres_participle"};

IndicatorBits extract_indicators(const ClauseRecord& similar,
                                 const ConstituentKey& input_key) {
  IndicatorBits bits;
  bits.not_progressive = !similar.progressive;
  bits.special_perfect = similar.perfect && !similar.progressive;
  bits.all_match = similar.key == input_key;
  bits.not_pres_tense = similar.tense != TenseForm::Present;
  bits.past_pres_participle = similar.tense == TenseForm::Past ||
                              similar.tense == TenseForm::PresentParticiple;
  return bits;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::optional<bool> parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  return std::nullopt;
}

}  // namespace

std::optional<TenseForm> parse_tense(std::string_view s) {
  if (s == "present") return TenseForm::Present;
  if (s == "past") return TenseForm::Past;
  if (s == "present_participle") return TenseForm::PresentParticiple;
  if (s == "past_participle") return TenseForm::PastParticiple;
  if (s == "future") return TenseForm::Future;
  if (s == "other") return TenseForm::Other;
  return std::nullopt;
}

std::string_view tense_name(TenseForm t) {
  switch (t) {
    case TenseForm::Present: return "present";
    case TenseForm::Past: return "past";
    case TenseForm::PresentParticiple: return "present_participle";
    case TenseForm::PastParticiple: return "past_participle";
    case TenseForm::Future: return "future";
    case TenseForm::Other: return "other";
  }
  return "other";
}

std::optional<AspectLabel> parse_label(std::string_view s) {
  if (s == "telic") return AspectLabel::Telic;
  if (s == "non_telic") return AspectLabel::NonTelic;
  if (s == "state") return AspectLabel::State;
  if (s == "unknown") return AspectLabel::Unknown;
  return std::nullopt;
}

std::string_view label_name(AspectLabel l) {
  switch (l) {
    case AspectLabel::Telic: return "telic";
    case AspectLabel::NonTelic: return "non_telic";
    case AspectLabel::State: return "state";
    case AspectLabel::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<ClauseRecord> validate_record(const RawRecord& raw,
                                            std::vector<std::string>& errors) {
  ClauseRecord rec;
  const std::size_t before = errors.size();

  for (int i = 0; i < kNumSlots; ++i) {
    if (raw.slots[i] && !raw.slots[i]->empty())
      rec.key.slots[i] = lower(*raw.slots[i]);
  }

  if (!raw.tense) {
    errors.emplace_back("missing tense");
  } else if (auto t = parse_tense(*raw.tense)) {
    rec.tense = *t;
  } else {
    errors.push_back("unknown tense \"" + *raw.tense + "\"");
  }

  if (!raw.progressive) {
    errors.emplace_back("missing progressive flag");
  } else if (auto b = parse_bool(*raw.progressive)) {
    rec.progressive = *b;
  } else {
    errors.push_back("non-boolean progressive flag \"" + *raw.progressive + "\"");
  }

  if (!raw.perfect) {
    errors.emplace_back("missing perfect flag");
  } else if (auto b = parse_bool(*raw.perfect)) {
    rec.perfect = *b;
  } else {
    errors.push_back("non-boolean perfect flag \"" + *raw.perfect + "\"");
  }

  if (raw.label) {
    if (auto l = parse_label(*raw.label)) {
      rec.label = *l;
    } else {
      errors.push_back("unknown label \"" + *raw.label + "\"");
    }
  }

  if (raw.text && !raw.text->empty()) rec.source_text = *raw.text;

  if (errors.size() != before) return std::nullopt;
  return rec;
}

RawRecord encode_record(const ClauseRecord& rec) {
  RawRecord raw;
  for (int i = 0; i < kNumSlots; ++i) raw.slots[i] = rec.key.slots[i];
  raw.tense = std::string(tense_name(rec.tense));
  raw.progressive = rec.progressive ? "true" : "false";
  raw.perfect = rec.perfect ? "true" : "false";
  raw.label = std::string(label_name(rec.label));
  raw.text = rec.source_text;
  return raw;
}

}  // namespace aspectgp
