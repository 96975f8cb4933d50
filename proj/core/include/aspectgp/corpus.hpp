#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aspectgp/clause.hpp"

namespace aspectgp {

struct Corpus {
  std::vector<ClauseRecord> records;  // records[i].id == i
  std::string source_name;

  std::size_t size() const { return records.size(); }

  /// Ids of records labeled Telic or NonTelic, in corpus order.
  std::vector<std::uint32_t> labeled_event_ids() const;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// One entry per rejected or suspicious line: (1-based line number, message).
  std::vector<std::pair<std::size_t, std::string>> issues;
};

/// Decodes one JSON line into a record with id unset. On failure returns
/// nullopt and appends messages to errors; unknown-field warnings go to
/// warnings when given.
std::optional<ClauseRecord> parse_record_line(
    const std::string& line, std::vector<std::string>& errors,
    std::vector<std::string>* warnings = nullptr);

/// Reads JSON-lines clause records. Malformed lines are skipped and
/// reported; ids are assigned in order over the accepted records. Blank
/// lines are ignored. Unknown fields are reported as warnings but do not
/// reject the record.
Corpus ingest(std::istream& in, std::string source_name, IngestReport& report);

Corpus read_corpus_file(const std::string& path, IngestReport& report);

/// Serializes one record as a single JSON line in the corpus wire format.
std::string record_to_json_line(const ClauseRecord& rec);

void write_corpus_file(const Corpus& corpus, const std::string& path);

}  // namespace aspectgp
