#include "asrsel/corpus.hpp"

#include <cmath>
#include <string_view>

#include "asrsel/error.hpp"
#include "asrsel/io.hpp"

namespace asrsel {

namespace fs = std::filesystem;

const UtteranceBundle* Dataset::find(const std::string& id) const {
  auto it = utterances_.find(id);
  return it == utterances_.end() ? nullptr : &it->second;
}

namespace {

std::string at(const std::string& origin) { return origin.empty() ? std::string() : " (" + origin + ")"; }

}  // namespace

void DatasetBuilder::add(UtteranceRecord record, const std::string& origin) {
  std::string id = record.id;
  if (!utterances_.emplace(id, std::move(record)).second) {
    throw DataError("duplicate utterance id '" + id + "'" + at(origin));
  }
}

void DatasetBuilder::add(HypothesisRecord record, const std::string& origin) {
  auto key = std::make_pair(record.utterance_id, record.engine);
  if (!hypotheses_.emplace(key, std::move(record)).second) {
    throw DataError("duplicate " + std::string(to_string(key.second)) + " hypothesis for utterance '" +
                    key.first + "'" + at(origin));
  }
}

void DatasetBuilder::add(AlignmentRecord record, const std::string& origin) {
  std::string id = record.utterance_id;
  if (!alignments_.emplace(id, std::move(record)).second) {
    throw DataError("duplicate alignment record for utterance '" + id + "'" + at(origin));
  }
}

void DatasetBuilder::add(AcousticsRecord record, const std::string& origin) {
  std::string id = record.utterance_id;
  if (!acoustics_.emplace(id, std::move(record)).second) {
    throw DataError("duplicate acoustics record for utterance '" + id + "'" + at(origin));
  }
}

Dataset DatasetBuilder::build(const IngestOptions& options) const {
  Dataset ds;
  std::set<std::string> filtered;
  for (const auto& [id, utt] : utterances_) {
    if (utt.duration_ms() < options.min_duration_ms) {
      filtered.insert(id);
      ++ds.dropped_short_;
      continue;
    }
    ds.corpora_.insert(utt.corpus);
    ds.utterances_.emplace(id, UtteranceBundle{utt, {}, {}, {}, {}});
  }

  struct Orphans {
    std::size_t unknown = 0;
    std::size_t filtered = 0;
  };
  auto attach_point = [&](const std::string& id, Orphans& orphans) -> UtteranceBundle* {
    auto it = ds.utterances_.find(id);
    if (it != ds.utterances_.end()) return &it->second;
    if (filtered.count(id)) {
      ++orphans.filtered;
    } else {
      ++orphans.unknown;
    }
    return nullptr;
  };
  auto report = [&](const char* kind, const Orphans& orphans) {
    if (orphans.unknown > 0) {
      ds.warnings_.push_back("discarded " + std::to_string(orphans.unknown) + " " + kind +
                             " record(s) referencing unknown utterances");
    }
    if (orphans.filtered > 0) {
      ds.warnings_.push_back("discarded " + std::to_string(orphans.filtered) + " " + kind +
                             " record(s) referencing utterances removed by the duration filter");
    }
  };

  Orphans hyp_orphans;
  for (const auto& [key, hyp] : hypotheses_) {
    if (auto* bundle = attach_point(key.first, hyp_orphans)) {
      (key.second == Engine::kWeak ? bundle->weak : bundle->strong) = hyp;
    }
  }
  Orphans align_orphans;
  for (const auto& [id, rec] : alignments_) {
    if (auto* bundle = attach_point(id, align_orphans)) bundle->alignment = rec;
  }
  Orphans ac_orphans;
  for (const auto& [id, rec] : acoustics_) {
    if (auto* bundle = attach_point(id, ac_orphans)) bundle->acoustics = rec;
  }
  report("hypothesis", hyp_orphans);
  report("alignment", align_orphans);
  report("acoustics", ac_orphans);
  return ds;
}

namespace {

bool is_blank(std::string_view line) { return line.find_first_not_of(" \t\r") == std::string_view::npos; }

bool is_record_schema(std::string_view name) {
  return name == schema::kUtterances || name == schema::kHypotheses || name == schema::kAlignment ||
         name == schema::kAcoustics;
}

struct InputFile {
  fs::path path;
  bool from_directory = false;
};

std::vector<InputFile> collect_inputs(const std::vector<fs::path>& paths) {
  std::vector<InputFile> out;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      for (const auto& f : io::expand_inputs({p})) out.push_back({f, true});
    } else if (fs::exists(p)) {
      out.push_back({p, false});
    } else {
      throw Error("input '" + p.string() + "' does not exist");
    }
  }
  return out;
}

// Loads one file into the builder. With `diag` null the first problem is
// thrown; otherwise it is recorded and the line skipped.
void load_file(const InputFile& input, DatasetBuilder& builder, Diagnostics* diag) {
  const std::string name = input.path.filename().string();
  const std::string content = io::read_file(input.path);
  const auto lines = io::split_lines(content);

  std::optional<FileHeader> header;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const LineContext where{name, i + 1};
    try {
      Json j = parse_json_line(lines[i], where);
      if (!header) {
        header = header_from_json(j, where);
        if (!is_record_schema(header->schema)) {
          if (input.from_directory) return;
          throw ParseError(name, i + 1, "schema", "unsupported schema '" + header->schema + "'");
        }
        continue;
      }
      const std::string origin = name + ":" + std::to_string(i + 1);
      if (header->schema == schema::kUtterances) {
        builder.add(utterance_from_json(j, where), origin);
      } else if (header->schema == schema::kHypotheses) {
        builder.add(hypothesis_from_json(j, where), origin);
      } else if (header->schema == schema::kAlignment) {
        builder.add(alignment_from_json(j, where), origin);
      } else {
        builder.add(acoustics_from_json(j, where), origin);
      }
    } catch (const Error& e) {
      if (!diag) throw;
      diag->errors.emplace_back(e.what());
      // Without a usable header the remaining lines cannot be interpreted.
      if (!header) return;
    }
  }
}

}  // namespace

Dataset parse_manifest(const std::vector<fs::path>& paths, const IngestOptions& options) {
  DatasetBuilder builder;
  for (const auto& input : collect_inputs(paths)) load_file(input, builder, nullptr);
  return builder.build(options);
}

Dataset load_with_diagnostics(const std::vector<fs::path>& paths, const IngestOptions& options,
                              Diagnostics& diagnostics) {
  DatasetBuilder builder;
  std::vector<InputFile> inputs;
  try {
    inputs = collect_inputs(paths);
  } catch (const Error& e) {
    diagnostics.errors.emplace_back(e.what());
    return {};
  }
  for (const auto& input : inputs) {
    try {
      load_file(input, builder, &diagnostics);
    } catch (const Error& e) {
      diagnostics.errors.emplace_back(e.what());
    }
  }
  Dataset ds = builder.build(options);
  diagnostics.warnings.insert(diagnostics.warnings.end(), ds.warnings().begin(), ds.warnings().end());
  return ds;
}

std::vector<SkipRecord> load_skip_log(const fs::path& path) {
  const std::string name = path.filename().string();
  const std::string content = io::read_file(path);
  const auto lines = io::split_lines(content);
  std::vector<SkipRecord> out;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const LineContext where{name, i + 1};
    const Json j = parse_json_line(lines[i], where);
    if (!header_seen) {
      const FileHeader h = header_from_json(j, where);
      if (h.schema != schema::kSkipLog) {
        throw ParseError(name, i + 1, "schema", "expected schema 'skip_log', got '" + h.schema + "'");
      }
      header_seen = true;
      continue;
    }
    out.push_back(skip_from_json(j, where));
  }
  if (!header_seen) throw ParseError(name, 1, "schema", "missing header line");
  return out;
}

void write_dataset(const Dataset& dataset, const fs::path& directory) {
  std::string utts = dump_line(make_header(schema::kUtterances)) + "\n";
  std::string hyps = dump_line(make_header(schema::kHypotheses)) + "\n";
  std::string aligns = dump_line(make_header(schema::kAlignment)) + "\n";
  std::string acoustics = dump_line(make_header(schema::kAcoustics)) + "\n";
  for (const auto& [id, b] : dataset.utterances()) {
    utts += dump_line(to_json(b.utterance)) + "\n";
    if (b.weak) hyps += dump_line(to_json(*b.weak)) + "\n";
    if (b.strong) hyps += dump_line(to_json(*b.strong)) + "\n";
    if (b.alignment) aligns += dump_line(to_json(*b.alignment)) + "\n";
    if (b.acoustics) acoustics += dump_line(to_json(*b.acoustics)) + "\n";
  }
  io::write_file_atomic(directory / "utterances.jsonl", utts);
  io::write_file_atomic(directory / "hypotheses.jsonl", hyps);
  io::write_file_atomic(directory / "alignment.jsonl", aligns);
  io::write_file_atomic(directory / "acoustics.jsonl", acoustics);
}

double CorpusStats::minutes() const {
  return std::round(static_cast<double>(duration_ms) / 60000.0 * 10.0) / 10.0;
}

DatasetStats dataset_stats(const Dataset& dataset) {
  DatasetStats stats;
  std::map<std::string, std::set<std::string>> recordings;
  std::set<std::pair<std::string, std::string>> all_recordings;
  for (const auto& [id, b] : dataset.utterances()) {
    auto& c = stats.per_corpus[b.utterance.corpus];
    ++c.utterances;
    c.duration_ms += b.utterance.duration_ms();
    recordings[b.utterance.corpus].insert(b.utterance.recording);
    all_recordings.emplace(b.utterance.corpus, b.utterance.recording);
    ++stats.total.utterances;
    stats.total.duration_ms += b.utterance.duration_ms();
  }
  for (auto& [corpus, c] : stats.per_corpus) c.recordings = recordings[corpus].size();
  stats.total.recordings = all_recordings.size();
  return stats;
}

}  // namespace asrsel
