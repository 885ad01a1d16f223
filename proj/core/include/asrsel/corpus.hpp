#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asrsel/records.hpp"

namespace asrsel {

/// An utterance joined with every record that references it.
struct UtteranceBundle {
  UtteranceRecord utterance;
  std::optional<HypothesisRecord> weak;
  std::optional<HypothesisRecord> strong;
  std::optional<AlignmentRecord> alignment;
  std::optional<AcousticsRecord> acoustics;

  const std::optional<HypothesisRecord>& hypothesis(Engine engine) const {
    return engine == Engine::kWeak ? weak : strong;
  }

  bool operator==(const UtteranceBundle&) const = default;
};

/// Non-fatal findings collected while loading record files.
struct Diagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

/// Immutable after construction; safe to share read-only across threads.
class Dataset {
 public:
  Dataset() = default;

  /// Keyed and iterated in utterance-id order.
  const std::map<std::string, UtteranceBundle>& utterances() const { return utterances_; }
  const std::set<std::string>& corpora() const { return corpora_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// Utterances removed by the minimum-duration filter.
  std::size_t dropped_short() const { return dropped_short_; }

  std::size_t size() const { return utterances_.size(); }
  bool empty() const { return utterances_.empty(); }
  const UtteranceBundle* find(const std::string& id) const;

  bool operator==(const Dataset& other) const {
    return utterances_ == other.utterances_ && corpora_ == other.corpora_;
  }

 private:
  friend class DatasetBuilder;
  std::map<std::string, UtteranceBundle> utterances_;
  std::set<std::string> corpora_;
  std::vector<std::string> warnings_;
  std::size_t dropped_short_ = 0;
};

struct IngestOptions {
  /// Utterances with duration_ms below this are dropped (300 ms survives).
  std::int64_t min_duration_ms = 300;
};

/// Accumulates raw records and joins them into a Dataset. Duplicate keys are
/// rejected as they are added; orphan handling and the duration filter run in
/// build().
class DatasetBuilder {
 public:
  /// `origin` is used in error messages only (e.g. "utterances.jsonl:12").
  void add(UtteranceRecord record, const std::string& origin = {});
  void add(HypothesisRecord record, const std::string& origin = {});
  void add(AlignmentRecord record, const std::string& origin = {});
  void add(AcousticsRecord record, const std::string& origin = {});

  Dataset build(const IngestOptions& options = {}) const;

 private:
  std::map<std::string, UtteranceRecord> utterances_;
  std::map<std::pair<std::string, Engine>, HypothesisRecord> hypotheses_;
  std::map<std::string, AlignmentRecord> alignments_;
  std::map<std::string, AcousticsRecord> acoustics_;
};

/// Loads and joins record files. Files are classified by their header's
/// schema name, so argument order does not matter; directories are expanded
/// to their *.jsonl files and files of other schemas inside them are skipped.
///
/// Throws ParseError for a malformed line and DataError for duplicate ids.
/// Records referencing unknown or filtered-out utterances are dropped and
/// counted in Dataset::warnings().
Dataset parse_manifest(const std::vector<std::filesystem::path>& paths, const IngestOptions& options = {});

/// Same as parse_manifest but never throws on data problems: every problem is
/// appended to `diagnostics` and parsing continues with the next line.
Dataset load_with_diagnostics(const std::vector<std::filesystem::path>& paths, const IngestOptions& options,
                              Diagnostics& diagnostics);

/// Reads a skip log (schema "skip_log"). Throws ParseError with the line number.
std::vector<SkipRecord> load_skip_log(const std::filesystem::path& path);

/// Writes the four record files (utterances/hypotheses/alignment/acoustics
/// `.jsonl`) into `directory`. Records are ordered by utterance id, then engine.
void write_dataset(const Dataset& dataset, const std::filesystem::path& directory);

struct CorpusStats {
  std::size_t utterances = 0;
  std::int64_t duration_ms = 0;
  std::size_t recordings = 0;

  /// Duration in minutes rounded to one decimal.
  double minutes() const;
};

struct DatasetStats {
  std::map<std::string, CorpusStats> per_corpus;
  CorpusStats total;
};

DatasetStats dataset_stats(const Dataset& dataset);

}  // namespace asrsel
