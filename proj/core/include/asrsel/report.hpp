#pragma once

// On-disk report documents and their human-readable renderings.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asrsel/corpus.hpp"
#include "asrsel/eval.hpp"
#include "asrsel/features.hpp"
#include "asrsel/lexical.hpp"
#include "asrsel/records.hpp"

namespace asrsel {

std::string_view tool_version();

/// Provenance embedded in every emitted report.
struct RunManifest {
  std::string command;
  Json config = Json::object();
  /// (file name, sha256) in argument order.
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string version{tool_version()};
  std::optional<std::uint64_t> seed;
  /// Only recorded on request, so default runs stay byte-identical.
  std::optional<std::string> created_at;

  bool operator==(const RunManifest&) const = default;
};

Json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& j);

/// Appends the checksum of every file, named by its basename.
void add_input_checksums(RunManifest& manifest, const std::vector<std::filesystem::path>& files);

/// UTC timestamp taken from SOURCE_DATE_EPOCH when it is set, otherwise from
/// the clock.
std::string current_timestamp();

/// Rounds to six decimals; report numbers go through this so that text and
/// JSON renderings agree and last-bit libm differences do not leak.
double report_round(double value);

/// Undefined values render as an em dash.
inline constexpr std::string_view kUndefined = "\xE2\x80\x94";
std::string format_cell(const std::optional<double>& value, int decimals = 2);

// ---------------------------------------------------------------------------
// Features file

struct FeatureRow {
  std::string utterance_id;
  FeatureVector features;

  bool operator==(const FeatureRow&) const = default;
};

/// Header carries the feature names and the manifest; rows follow in the
/// given order.
std::string features_document(std::span<const FeatureRow> rows, const RunManifest& manifest);
std::vector<FeatureRow> parse_features(std::string_view text, std::string_view origin = "<features>");
std::vector<FeatureRow> load_features(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Cross-validation and sweep reports

Json metrics_to_json(const SelectionMetrics& metrics);
Json cv_report_json(const CvResult& result, const RunManifest& manifest);
/// Test corpus, training corpora, selected-class quality, the no-selection
/// baseline, and the share transcribed; one row per fold plus a mean row.
std::string cv_report_text(const CvResult& result);
Json sweep_report_json(const SweepResult& result, const RunManifest& manifest);
/// "no selection" row, then one row per FP cost.
std::string sweep_report_text(const SweepResult& result);

// ---------------------------------------------------------------------------
// Selection file

struct SelectedRow {
  std::string utterance_id;
  std::string transcript;
  double decision = 0.0;

  bool operator==(const SelectedRow&) const = default;
};

struct SelectionSummary {
  std::size_t utterances = 0;
  std::size_t selected = 0;
  std::int64_t duration_ms = 0;
  std::int64_t selected_duration_ms = 0;

  double pct_duration_selected() const;
  double pct_count_selected() const;
};

std::string selection_document(std::span<const SelectedRow> rows, const SelectionSummary& summary,
                               const RunManifest& manifest);
std::string selection_summary_line(const SelectionSummary& summary);

struct SelectionFile {
  std::vector<SelectedRow> rows;
  Json header;
};

SelectionFile parse_selection(std::string_view text, std::string_view origin = "<selection>");
SelectionFile load_selection(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Lexical reports

struct CorrelationColumn {
  std::string label;
  std::vector<CorrelationRow> rows;
};

/// Part of speech down the side, one column per utterance scope.
std::string correlation_text(std::span<const CorrelationColumn> columns);
Json correlation_json(std::span<const CorrelationColumn> columns, std::uint64_t min_auto_count,
                      const RunManifest& manifest);

// ---------------------------------------------------------------------------
// Dataset summaries

std::string stats_text(const DatasetStats& stats);
Json stats_json(const DatasetStats& stats);

struct ClassBalance {
  std::size_t low_count = 0;
  std::size_t high_count = 0;
  std::int64_t low_ms = 0;
  std::int64_t high_ms = 0;
};

ClassBalance class_balance(std::span<const RawExample> examples, double wer_threshold);
/// e.g. "LOW: 72.0 min (37%), 3210 utterances; HIGH: ..."
std::string class_balance_text(const ClassBalance& balance);

/// Plain-text table with left-aligned columns separated by two spaces.
/// Widths count UTF-8 code points.
std::string render_table(const std::vector<std::vector<std::string>>& rows);

}  // namespace asrsel
