#include "aspectgp/corpus.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace aspectgp {

using nlohmann::json;

std::vector<std::uint32_t> Corpus::labeled_event_ids() const {
  std::vector<std::uint32_t> ids;
  for (const auto& r : records)
    if (r.label == AspectLabel::Telic || r.label == AspectLabel::NonTelic)
      ids.push_back(r.id);
  return ids;
}

namespace {

const std::set<std::string> kKnownFields = {
    "adjunct_preposition", "object_determiner", "verb", "particle",
    "complement_preposition", "tense", "progressive", "perfect", "label",
    "text"};

// JSON value -> RawRecord field string. Booleans become "true"/"false";
// other non-string scalars are carried verbatim so validate_record can
// name them in its error.
std::optional<std::string> raw_field(const json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

}  // namespace

std::optional<ClauseRecord> parse_record_line(
    const std::string& line, std::vector<std::string>& errors,
    std::vector<std::string>* warnings) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    errors.emplace_back("not a JSON object");
    return std::nullopt;
  }

  const std::size_t before = errors.size();
  RawRecord raw;
  for (const auto& [field, value] : obj.items()) {
    if (!kKnownFields.count(field)) {
      if (warnings)
        warnings->push_back("ignoring unknown field \"" + field + "\"");
      continue;
    }
    auto s = raw_field(value);
    if (field == "tense") raw.tense = s;
    else if (field == "progressive") raw.progressive = s;
    else if (field == "perfect") raw.perfect = s;
    else if (field == "label") raw.label = s;
    else if (field == "text") {
      if (!value.is_null() && !value.is_string())
        errors.push_back("text must be a string or null");
      else raw.text = s;
    } else {
      if (!value.is_null() && !value.is_string()) {
        errors.push_back(field + " must be a string or null");
        continue;
      }
      for (int i = 0; i < kNumSlots; ++i)
        if (field == kSlotNames[i]) raw.slots[i] = s;
    }
  }
  if (errors.size() != before) {
    // still run validation so one report names every bad field
    validate_record(raw, errors);
    return std::nullopt;
  }
  return validate_record(raw, errors);
}

Corpus ingest(std::istream& in, std::string source_name, IngestReport& report) {
  Corpus corpus;
  corpus.source_name = std::move(source_name);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::vector<std::string> errors, warnings;
    auto rec = parse_record_line(line, errors, &warnings);
    for (const auto& w : warnings) report.issues.emplace_back(line_no, w);
    if (!rec) {
      std::string msg;
      for (const auto& e : errors) {
        if (!msg.empty()) msg += "; ";
        msg += e;
      }
      report.issues.emplace_back(line_no, msg);
      ++report.rejected;
      continue;
    }

    rec->id = static_cast<std::uint32_t>(corpus.records.size());
    corpus.records.push_back(std::move(*rec));
    ++report.accepted;
  }
  return corpus;
}

Corpus read_corpus_file(const std::string& path, IngestReport& report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return ingest(in, path, report);
}

std::string record_to_json_line(const ClauseRecord& rec) {
  json obj;
  for (int i = 0; i < kNumSlots; ++i) {
    const auto& slot = rec.key.slots[i];
    obj[std::string(kSlotNames[i])] = slot ? json(*slot) : json(nullptr);
  }
  obj["tense"] = std::string(tense_name(rec.tense));
  obj["progressive"] = rec.progressive;
  obj["perfect"] = rec.perfect;
  if (rec.label != AspectLabel::Unknown)
    obj["label"] = std::string(label_name(rec.label));
  if (rec.source_text) obj["text"] = *rec.source_text;
  return obj.dump();
}

void write_corpus_file(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (const auto& rec : corpus.records) out << record_to_json_line(rec) << '\n';
}

}  // namespace aspectgp
