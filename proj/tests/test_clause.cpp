#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aspectgp/clause.hpp"
#include "aspectgp/rng.hpp"
#include "oracles.hpp"

using namespace aspectgp;

namespace {

ClauseRecord make_record(TenseForm tense, bool progressive, bool perfect,
                         const ConstituentKey& key) {
  ClauseRecord rec;
  rec.tense = tense;
  rec.progressive = progressive;
  rec.perfect = perfect;
  rec.key = key;
  return rec;
}

ConstituentKey sample_key() {
  ConstituentKey key;
  key.slots[2] = "run";
  key.slots[3] = "off";
  return key;
}

}  // namespace

TEST_CASE("indicators: all five satisfied") {
  const ConstituentKey key = sample_key();
  const auto rec = make_record(TenseForm::Past, false, true, key);
  const IndicatorBits bits = extract_indicators(rec, key);
  CHECK(bits == IndicatorBits{true, true, true, true, true});
}

TEST_CASE("indicators: progressive defeats NotProgressive and SpecialPerfect") {
  const ConstituentKey key = sample_key();
  ConstituentKey other = key;
  other.slots[2] = "walk";
  const auto rec =
      make_record(TenseForm::PresentParticiple, true, true, other);
  const IndicatorBits bits = extract_indicators(rec, key);
  CHECK(bits == IndicatorBits{false, false, false, true, true});
}

TEST_CASE("indicators: present tense defeats the tense indicators") {
  const ConstituentKey key = sample_key();
  const auto rec = make_record(TenseForm::Present, false, false, key);
  const IndicatorBits bits = extract_indicators(rec, key);
  CHECK(bits == IndicatorBits{true, false, true, false, false});
}

TEST_CASE("indicators: past participle counts for NotPresTense only") {
  const ConstituentKey key = sample_key();
  const auto rec = make_record(TenseForm::PastParticiple, false, false, key);
  const IndicatorBits bits = extract_indicators(rec, key);
  CHECK(bits.not_pres_tense);
  CHECK_FALSE(bits.past_pres_participle);
}

TEST_CASE("indicators: absent slots match only absent slots") {
  ConstituentKey key = sample_key();
  ConstituentKey with_particle = key;
  ConstituentKey without_particle = key;
  without_particle.slots[3] = std::nullopt;

  const auto rec = make_record(TenseForm::Past, false, false, with_particle);
  CHECK(extract_indicators(rec, with_particle).all_match);
  CHECK_FALSE(extract_indicators(rec, without_particle).all_match);
}

TEST_CASE("indicators: special_perfect implies not_progressive on random records") {
  Rng rng(101);
  for (int i = 0; i < 2000; ++i) {
    const ClauseRecord rec = oracle::random_record(rng, 4, 0.3);
    const ConstituentKey key = oracle::random_key(rng, 4, 0.3);
    const IndicatorBits bits = extract_indicators(rec, key);
    CHECK(bits.special_perfect <= bits.not_progressive);
    CHECK(extract_indicators(rec, rec.key).all_match);
  }
}

TEST_CASE("indicators ignore id and source text") {
  const ConstituentKey key = sample_key();
  auto a = make_record(TenseForm::Past, false, true, key);
  auto b = a;
  b.id = 999;
  b.source_text = "He ran off.";
  CHECK(extract_indicators(a, key) == extract_indicators(b, key));
}

TEST_CASE("validate_record lowercases tokens") {
  RawRecord raw;
  raw.slots[2] = "Run";
  raw.tense = "past";
  raw.progressive = "false";
  raw.perfect = "false";
  std::vector<std::string> errors;
  const auto rec = validate_record(raw, errors);
  REQUIRE(rec);
  CHECK(errors.empty());
  CHECK(rec->key.slots[2] == "run");
}

TEST_CASE("validate_record rejects unknown tense") {
  RawRecord raw;
  raw.tense = "pluperfect";
  raw.progressive = "false";
  raw.perfect = "false";
  std::vector<std::string> errors;
  CHECK_FALSE(validate_record(raw, errors));
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("unknown tense") != std::string::npos);
}

TEST_CASE("validate_record decodes a full labeled record") {
  RawRecord raw;
  raw.slots[2] = "leave";
  raw.tense = "past";
  raw.progressive = "false";
  raw.perfect = "false";
  raw.label = "telic";
  std::vector<std::string> errors;
  const auto rec = validate_record(raw, errors);
  REQUIRE(rec);
  CHECK(rec->label == AspectLabel::Telic);
  CHECK(rec->tense == TenseForm::Past);
}

TEST_CASE("validate_record collects one error per bad field") {
  RawRecord raw;
  raw.tense = "sometime";
  raw.progressive = "yes";
  raw.perfect = "true";
  raw.label = "telical";
  std::vector<std::string> errors;
  CHECK_FALSE(validate_record(raw, errors));
  CHECK(errors.size() == 3);
}

TEST_CASE("validate_record treats empty tokens as absent") {
  RawRecord raw;
  raw.slots[3] = "";
  raw.tense = "past";
  raw.progressive = "false";
  raw.perfect = "false";
  std::vector<std::string> errors;
  const auto rec = validate_record(raw, errors);
  REQUIRE(rec);
  CHECK_FALSE(rec->key.slots[3].has_value());
}

TEST_CASE("encode/validate round-trip on random normalized records") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    ClauseRecord rec = oracle::random_record(rng, 6, 0.4);
    if (rng.bernoulli(0.3)) rec.source_text = "sample text";
    std::vector<std::string> errors;
    const auto back = validate_record(encode_record(rec), errors);
    REQUIRE(back);
    CHECK(errors.empty());
    CHECK(back->key == rec.key);
    CHECK(back->tense == rec.tense);
    CHECK(back->progressive == rec.progressive);
    CHECK(back->perfect == rec.perfect);
    CHECK(back->label == rec.label);
    CHECK(back->source_text == rec.source_text);
  }
}
