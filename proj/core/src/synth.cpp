#include "aspectgp/synth.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "aspectgp/rng.hpp"

namespace aspectgp {

using nlohmann::json;

void GenSpec::validate() const {
  auto prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
  };
  if (n_key_clusters < 1)
    throw std::invalid_argument("n_key_clusters must be >= 1");
  prob(telic_fraction, "telic_fraction");
  prob(cluster_purity, "cluster_purity");
  for (const ClassMorphology* m : {&telic, &non_telic}) {
    prob(m->p_progressive, "p_progressive");
    prob(m->p_perfect, "p_perfect");
    double sum = 0.0;
    for (double p : m->tense_dist) {
      prob(p, "tense probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("tense distribution must sum to 1");
  }
  for (std::size_t v : vocab_sizes)
    if (v < 1) throw std::invalid_argument("vocab sizes must be >= 1");
}

namespace {

const std::array<const char*, kNumSlots> kSlotPrefixes = {"ap", "od", "v",
                                                          "prt", "cp"};

ConstituentKey draw_key(Rng& rng, const GenSpec& spec) {
  ConstituentKey key;
  for (int i = 0; i < kNumSlots; ++i)
    key.slots[i] = std::string(kSlotPrefixes[i]) +
                   std::to_string(rng.below(spec.vocab_sizes[i]));
  return key;
}

TenseForm draw_tense(Rng& rng, const ClassMorphology& m) {
  const double u = rng.unit();
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    acc += m.tense_dist[i];
    if (u < acc) return static_cast<TenseForm>(i);
  }
  return TenseForm::Other;
}

}  // namespace

std::pair<Corpus, GenReport> generate(const GenSpec& spec) {
  spec.validate();

  double combos = 1.0;
  for (std::size_t v : spec.vocab_sizes) combos *= static_cast<double>(v);
  if (combos < static_cast<double>(spec.n_key_clusters))
    throw std::invalid_argument(
        "vocab too small to draw distinct cluster keys");

  Rng rng(spec.seed);

  std::vector<ConstituentKey> cluster_keys;
  std::set<std::array<std::string, kNumSlots>> seen;
  std::size_t attempts = 0;
  while (cluster_keys.size() < spec.n_key_clusters) {
    if (++attempts > spec.n_key_clusters * 1000 + 100000)
      throw std::runtime_error("cluster key sampling failed to converge");
    ConstituentKey key = draw_key(rng, spec);
    std::array<std::string, kNumSlots> flat;
    for (int i = 0; i < kNumSlots; ++i) flat[i] = *key.slots[i];
    if (seen.insert(flat).second) cluster_keys.push_back(std::move(key));
  }

  std::vector<AspectLabel> cluster_labels(spec.n_key_clusters);
  for (auto& label : cluster_labels)
    label = rng.bernoulli(spec.telic_fraction) ? AspectLabel::Telic
                                               : AspectLabel::NonTelic;

  Corpus corpus;
  corpus.source_name = "synthetic";
  corpus.records.reserve(spec.n_clauses);
  GenReport report;
  report.cluster_sizes.assign(spec.n_key_clusters, 0);

  std::size_t telic_np = 0, telic_sp = 0, telic_npt = 0, telic_ppp = 0;
  std::size_t nt_np = 0, nt_sp = 0, nt_npt = 0, nt_ppp = 0;

  for (std::size_t i = 0; i < spec.n_clauses; ++i) {
    const std::size_t cluster = rng.index(spec.n_key_clusters);
    ++report.cluster_sizes[cluster];

    const AspectLabel majority = cluster_labels[cluster];
    const bool keep = rng.bernoulli(spec.cluster_purity);
    const AspectLabel label =
        keep ? majority
             : (majority == AspectLabel::Telic ? AspectLabel::NonTelic
                                               : AspectLabel::Telic);
    const ClassMorphology& m =
        label == AspectLabel::Telic ? spec.telic : spec.non_telic;

    ClauseRecord rec;
    rec.id = static_cast<std::uint32_t>(i);
    rec.key = cluster_keys[cluster];
    rec.progressive = rng.bernoulli(m.p_progressive);
    rec.perfect = rng.bernoulli(m.p_perfect);
    rec.tense = draw_tense(rng, m);
    rec.label = label;

    const bool np = !rec.progressive;
    const bool sp = rec.perfect && !rec.progressive;
    const bool npt = rec.tense != TenseForm::Present;
    const bool ppp = rec.tense == TenseForm::Past ||
                     rec.tense == TenseForm::PresentParticiple;
    if (label == AspectLabel::Telic) {
      ++report.telic_count;
      telic_np += np; telic_sp += sp; telic_npt += npt; telic_ppp += ppp;
    } else {
      ++report.non_telic_count;
      nt_np += np; nt_sp += sp; nt_npt += npt; nt_ppp += ppp;
    }
    corpus.records.push_back(std::move(rec));
  }

  auto rate = [](std::size_t count, std::size_t n) {
    return n ? static_cast<double>(count) / static_cast<double>(n) : 0.0;
  };
  report.telic_rates = {rate(telic_np, report.telic_count),
                        rate(telic_sp, report.telic_count),
                        rate(telic_npt, report.telic_count),
                        rate(telic_ppp, report.telic_count)};
  report.non_telic_rates = {rate(nt_np, report.non_telic_count),
                            rate(nt_sp, report.non_telic_count),
                            rate(nt_npt, report.non_telic_count),
                            rate(nt_ppp, report.non_telic_count)};
  return {std::move(corpus), std::move(report)};
}

GenSpec default_planted_spec() {
  GenSpec spec;
  spec.n_clauses = 5000;
  spec.n_key_clusters = 60;
  spec.telic_fraction = 0.68;
  spec.cluster_purity = 0.9;
  spec.seed = 42;

  std::array<double, 6> tense{};
  tense[static_cast<int>(TenseForm::Past)] = 0.8;
  tense[static_cast<int>(TenseForm::Present)] = 0.1;
  tense[static_cast<int>(TenseForm::PresentParticiple)] = 0.1;

  spec.telic.p_perfect = 0.60;
  spec.telic.p_progressive = 0.03;
  spec.telic.tense_dist = tense;
  spec.non_telic.p_perfect = 0.05;
  spec.non_telic.p_progressive = 0.15;
  spec.non_telic.tense_dist = tense;
  return spec;
}

namespace {

json morphology_to_json(const ClassMorphology& m) {
  json tense = json::object();
  for (int i = 0; i < 6; ++i)
    if (m.tense_dist[i] != 0.0)
      tense[std::string(tense_name(static_cast<TenseForm>(i)))] =
          m.tense_dist[i];
  return json{{"p_progressive", m.p_progressive},
              {"p_perfect", m.p_perfect},
              {"tense_dist", tense}};
}

ClassMorphology morphology_from_json(const json& obj,
                                     const ClassMorphology& defaults) {
  ClassMorphology m = defaults;
  if (obj.contains("p_progressive"))
    m.p_progressive = obj.at("p_progressive").get<double>();
  if (obj.contains("p_perfect")) m.p_perfect = obj.at("p_perfect").get<double>();
  if (obj.contains("tense_dist")) {
    m.tense_dist = {};
    for (const auto& [name, value] : obj.at("tense_dist").items()) {
      const auto t = parse_tense(name);
      if (!t) throw std::invalid_argument("unknown tense \"" + name + "\"");
      m.tense_dist[static_cast<int>(*t)] = value.get<double>();
    }
  }
  return m;
}

}  // namespace

GenSpec genspec_from_json(const std::string& text) {
  const json obj = json::parse(text);
  GenSpec spec = default_planted_spec();
  if (obj.contains("n_clauses"))
    spec.n_clauses = obj.at("n_clauses").get<std::size_t>();
  if (obj.contains("n_key_clusters"))
    spec.n_key_clusters = obj.at("n_key_clusters").get<std::size_t>();
  if (obj.contains("telic_fraction"))
    spec.telic_fraction = obj.at("telic_fraction").get<double>();
  if (obj.contains("cluster_purity"))
    spec.cluster_purity = obj.at("cluster_purity").get<double>();
  if (obj.contains("seed")) spec.seed = obj.at("seed").get<std::uint64_t>();
  if (obj.contains("telic"))
    spec.telic = morphology_from_json(obj.at("telic"), spec.telic);
  if (obj.contains("non_telic"))
    spec.non_telic = morphology_from_json(obj.at("non_telic"), spec.non_telic);
  if (obj.contains("vocab_sizes")) {
    for (const auto& [name, value] : obj.at("vocab_sizes").items()) {
      bool known = false;
      for (int i = 0; i < kNumSlots; ++i) {
        if (name == kSlotNames[i]) {
          spec.vocab_sizes[i] = value.get<std::size_t>();
          known = true;
        }
      }
      if (!known)
        throw std::invalid_argument("unknown vocab slot \"" + name + "\"");
    }
  }
  spec.validate();
  return spec;
}

std::string genspec_to_json(const GenSpec& spec) {
  json vocab = json::object();
  for (int i = 0; i < kNumSlots; ++i)
    vocab[std::string(kSlotNames[i])] = spec.vocab_sizes[i];
  const json obj{{"n_clauses", spec.n_clauses},
                 {"n_key_clusters", spec.n_key_clusters},
                 {"telic_fraction", spec.telic_fraction},
                 {"cluster_purity", spec.cluster_purity},
                 {"seed", spec.seed},
                 {"telic", morphology_to_json(spec.telic)},
                 {"non_telic", morphology_to_json(spec.non_telic)},
                 {"vocab_sizes", vocab}};
  return obj.dump(2);
}

std::string genreport_to_json(const GenReport& report) {
  auto rates = [](const ClassIndicatorRates& r) {
    return json{{"not_progressive", r.not_progressive},
                {"special_perfect", r.special_perfect},
                {"not_pres_tense", r.not_pres_tense},
                {"past_pres_participle", r.past_pres_participle}};
  };
  const json obj{
      {"class_counts",
       {{"telic", report.telic_count}, {"non_telic", report.non_telic_count}}},
      {"indicator_rates",
       {{"telic", rates(report.telic_rates)},
        {"non_telic", rates(report.non_telic_rates)}}},
      {"cluster_sizes", report.cluster_sizes}};
  return obj.dump(2);
}

}  // namespace aspectgp
