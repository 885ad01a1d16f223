#include "asrsel/report.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>

#include "asrsel/checksum.hpp"
#include "asrsel/error.hpp"
#include "asrsel/io.hpp"

#ifndef ASRSEL_VERSION
#define ASRSEL_VERSION "0.0.0"
#endif

namespace asrsel {

std::string_view tool_version() { return ASRSEL_VERSION; }

Json to_json(const RunManifest& m) {
  Json j = Json::object();
  j["command"] = m.command;
  j["tool_version"] = m.version;
  j["config"] = m.config;
  Json inputs = Json::array();
  for (const auto& [name, sha] : m.inputs) inputs.push_back(Json{{"file", name}, {"sha256", sha}});
  j["inputs"] = inputs;
  j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
  j["created_at"] = m.created_at ? Json(*m.created_at) : Json(nullptr);
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.version = j.at("tool_version").get<std::string>();
    m.config = j.at("config");
    for (const auto& in : j.at("inputs")) {
      m.inputs.emplace_back(in.at("file").get<std::string>(), in.at("sha256").get<std::string>());
    }
    if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("created_at").is_null()) m.created_at = j.at("created_at").get<std::string>();
    return m;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed run manifest: ") + e.what());
  }
}

void add_input_checksums(RunManifest& manifest, const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) manifest.inputs.emplace_back(f.filename().string(), sha256_file(f));
}

std::string current_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double report_round(double value) {
  const double r = static_cast<double>(std::llround(value * 1e6)) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

std::string format_cell(const std::optional<double>& value, int decimals) {
  if (!value) return std::string(kUndefined);
  return io::fixed(report_round(*value), decimals);
}

namespace {

Json number_or_null(const std::optional<double>& v) { return v ? Json(report_round(*v)) : Json(nullptr); }

std::size_t display_width(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], display_width(row[c]));
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line.append(widths[c] - display_width(row[c]) + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string features_document(std::span<const FeatureRow> rows, const RunManifest& manifest) {
  Json names = Json::array();
  for (auto n : feature_names()) names.push_back(n);
  std::string out = dump_line(make_header(schema::kFeatures, Json{{"feature_names", names},
                                                                  {"manifest", to_json(manifest)}})) +
                    "\n";
  for (const auto& row : rows) {
    Json values = Json::array();
    Json mask = Json::array();
    for (const auto& v : row.features.values) {
      values.push_back(v ? Json(*v) : Json(nullptr));
      mask.push_back(v.has_value());
    }
    Json j = Json::object();
    j["utterance_id"] = row.utterance_id;
    j["values"] = values;
    j["mask"] = mask;
    out += dump_line(j) + "\n";
  }
  return out;
}

std::vector<FeatureRow> parse_features(std::string_view text, std::string_view origin) {
  const std::string file(origin);
  std::vector<FeatureRow> rows;
  std::set<std::string> seen;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (std::string_view line : io::split_lines(text)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const LineContext where{file, line_no};
    const Json j = parse_json_line(line, where);
    if (!header_seen) {
      const FileHeader h = header_from_json(j, where);
      if (h.schema != schema::kFeatures) {
        throw ParseError(file, line_no, "schema", "expected \"features\", got \"" + h.schema + "\"");
      }
      const auto& names = feature_names();
      if (!j.contains("feature_names") || !j["feature_names"].is_array() ||
          j["feature_names"].size() != kFeatureCount) {
        throw ParseError(file, line_no, "feature_names", "expected " + std::to_string(kFeatureCount) + " names");
      }
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (j["feature_names"][i] != names[i]) {
          throw ParseError(file, line_no, "feature_names", "feature " + std::to_string(i) + " should be '" +
                                                              std::string(names[i]) + "'");
        }
      }
      header_seen = true;
      continue;
    }
    if (!j.is_object() || !j.contains("utterance_id") || !j["utterance_id"].is_string() ||
        j["utterance_id"].get<std::string>().empty()) {
      throw ParseError(file, line_no, "utterance_id", "expected a non-empty string");
    }
    FeatureRow row;
    row.utterance_id = j["utterance_id"].get<std::string>();
    if (!seen.insert(row.utterance_id).second) {
      throw ParseError(file, line_no, "utterance_id", "duplicate id '" + row.utterance_id + "'");
    }
    if (!j.contains("values") || !j["values"].is_array() || j["values"].size() != kFeatureCount) {
      throw ParseError(file, line_no, "values", "expected " + std::to_string(kFeatureCount) + " entries");
    }
    if (!j.contains("mask") || !j["mask"].is_array() || j["mask"].size() != kFeatureCount) {
      throw ParseError(file, line_no, "mask", "expected " + std::to_string(kFeatureCount) + " booleans");
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const Json& v = j["values"][i];
      const Json& m = j["mask"][i];
      if (!m.is_boolean()) throw ParseError(file, line_no, "mask", "expected booleans");
      if (v.is_null()) {
        if (m.get<bool>()) throw ParseError(file, line_no, "mask", "entry " + std::to_string(i) + " marks a null value present");
        continue;
      }
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw ParseError(file, line_no, "values", "entry " + std::to_string(i) + " is not a finite number or null");
      }
      if (!m.get<bool>()) throw ParseError(file, line_no, "mask", "entry " + std::to_string(i) + " marks a value missing");
      row.features.values[i] = v.get<double>();
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(file, 1, "schema", "missing header line");
  return rows;
}

std::vector<FeatureRow> load_features(const std::filesystem::path& path) {
  return parse_features(io::read_file(path), path.string());
}

// ---------------------------------------------------------------------------

Json metrics_to_json(const SelectionMetrics& m) {
  Json j = Json::object();
  j["precision"] = number_or_null(m.precision);
  j["recall_count"] = number_or_null(m.recall_count);
  j["recall_duration"] = number_or_null(m.recall_duration);
  j["wer_median_selected"] = number_or_null(m.wer_median_selected);
  j["wer_mean_selected"] = number_or_null(m.wer_mean_selected);
  j["wer_median_all"] = number_or_null(m.wer_median_all);
  j["wer_mean_all"] = number_or_null(m.wer_mean_all);
  j["pct_transcribed_duration"] = report_round(m.pct_duration_selected);
  j["pct_transcribed_count"] = report_round(m.pct_count_selected);
  j["counts"] = Json{{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn}, {"fn", m.counts.fn}};
  j["utterances"] = m.utterances;
  j["duration_ms"] = m.duration_ms;
  j["selected_duration_ms"] = m.selected_duration_ms;
  return j;
}

namespace {

Json cv_body(const CvResult& r) {
  Json j = Json::object();
  j["fp_cost"] = r.fp_cost;
  Json folds = Json::array();
  for (const auto& f : r.folds) {
    Json fj = Json::object();
    fj["test_corpus"] = f.test_corpus;
    fj["train_corpora"] = f.train_corpora;
    fj["selected"] = metrics_to_json(f.metrics);
    fj["no_selection"] = metrics_to_json(f.baseline);
    folds.push_back(fj);
  }
  j["folds"] = folds;
  j["mean"] = metrics_to_json(r.mean);
  j["mean_no_selection"] = metrics_to_json(r.baseline_mean);
  j["pooled"] = metrics_to_json(r.pooled);
  return j;
}

std::vector<std::string> cv_row(const std::string& test, const std::string& train, const SelectionMetrics& m,
                                const SelectionMetrics& base) {
  return {test,
          train,
          format_cell(m.precision),
          format_cell(m.recall_count),
          format_cell(m.recall_duration),
          format_cell(m.wer_median_selected),
          format_cell(m.wer_mean_selected),
          format_cell(base.wer_median_all),
          format_cell(base.wer_mean_all),
          io::fixed(report_round(m.pct_duration_selected), 1),
          io::fixed(report_round(m.pct_count_selected), 1)};
}

}  // namespace

Json cv_report_json(const CvResult& result, const RunManifest& manifest) {
  Json j = Json::object();
  j["report"] = "cross_validation";
  j["manifest"] = to_json(manifest);
  const Json body = cv_body(result);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

std::string cv_report_text(const CvResult& result) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"", "", "Selected utterances (low-WER class)", "", "", "", "", "No selection", "", "% transcribed", ""});
  rows.push_back({"Test corpus", "Training corpora", "precision", "recall_count", "recall_duration", "wer_median",
                  "wer_mean", "wer_median", "wer_mean", "pct_duration", "pct_count"});
  for (const auto& f : result.folds) {
    rows.push_back(cv_row(f.test_corpus, join(f.train_corpora, ", "), f.metrics, f.baseline));
  }
  rows.push_back(cv_row("Mean", "", result.mean, result.baseline_mean));
  return "FP cost = " + io::fixed(result.fp_cost, 1) + "\n" + render_table(rows);
}

Json sweep_report_json(const SweepResult& result, const RunManifest& manifest) {
  Json j = Json::object();
  j["report"] = "fp_cost_sweep";
  j["manifest"] = to_json(manifest);
  j["no_selection"] = metrics_to_json(result.baseline);
  Json rows = Json::array();
  for (const auto& r : result.rows) rows.push_back(cv_body(r));
  j["rows"] = rows;
  return j;
}

std::string sweep_report_text(const SweepResult& result) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"FP cost", "precision", "recall_count", "recall_duration", "wer_median", "wer_mean",
                  "pct_transcribed_duration", "pct_transcribed_count"});
  const auto& b = result.baseline;
  rows.push_back({"no selection", std::string(kUndefined), std::string(kUndefined), std::string(kUndefined),
                  format_cell(b.wer_median_all), format_cell(b.wer_mean_all), "100.0", "100.0"});
  for (const auto& r : result.rows) {
    const auto& m = r.mean;
    rows.push_back({io::fixed(r.fp_cost, 1), format_cell(m.precision), format_cell(m.recall_count),
                    format_cell(m.recall_duration), format_cell(m.wer_median_selected),
                    format_cell(m.wer_mean_selected), io::fixed(report_round(m.pct_duration_selected), 1),
                    io::fixed(report_round(m.pct_count_selected), 1)});
  }
  return render_table(rows);
}

// ---------------------------------------------------------------------------

double SelectionSummary::pct_duration_selected() const {
  return duration_ms == 0 ? 0.0 : 100.0 * static_cast<double>(selected_duration_ms) / static_cast<double>(duration_ms);
}

double SelectionSummary::pct_count_selected() const {
  return utterances == 0 ? 0.0 : 100.0 * static_cast<double>(selected) / static_cast<double>(utterances);
}

std::string selection_document(std::span<const SelectedRow> rows, const SelectionSummary& s,
                               const RunManifest& manifest) {
  Json summary = Json::object();
  summary["utterances"] = s.utterances;
  summary["selected"] = s.selected;
  summary["duration_ms"] = s.duration_ms;
  summary["selected_duration_ms"] = s.selected_duration_ms;
  summary["pct_duration_selected"] = report_round(s.pct_duration_selected());
  summary["pct_count_selected"] = report_round(s.pct_count_selected());
  std::string out =
      dump_line(make_header(schema::kSelected, Json{{"summary", summary}, {"manifest", to_json(manifest)}})) + "\n";
  for (const auto& r : rows) {
    Json j = Json::object();
    j["utterance_id"] = r.utterance_id;
    j["transcript"] = r.transcript;
    j["decision"] = report_round(r.decision);
    out += dump_line(j) + "\n";
  }
  return out;
}

std::string selection_summary_line(const SelectionSummary& s) {
  return "selected " + std::to_string(s.selected) + " of " + std::to_string(s.utterances) + " utterances, " +
         io::fixed(static_cast<double>(s.selected_duration_ms) / 60000.0, 1) + " of " +
         io::fixed(static_cast<double>(s.duration_ms) / 60000.0, 1) + " min (" +
         io::fixed(report_round(s.pct_duration_selected()), 1) + "% of duration)";
}

SelectionFile parse_selection(std::string_view text, std::string_view origin) {
  const std::string file(origin);
  SelectionFile out;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (std::string_view line : io::split_lines(text)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const LineContext where{file, line_no};
    const Json j = parse_json_line(line, where);
    if (!header_seen) {
      const FileHeader h = header_from_json(j, where);
      if (h.schema != schema::kSelected) {
        throw ParseError(file, line_no, "schema", "expected \"selected\", got \"" + h.schema + "\"");
      }
      out.header = j;
      header_seen = true;
      continue;
    }
    SelectedRow r;
    if (!j.is_object() || !j.contains("utterance_id") || !j["utterance_id"].is_string()) {
      throw ParseError(file, line_no, "utterance_id", "expected a string");
    }
    r.utterance_id = j["utterance_id"].get<std::string>();
    if (!j.contains("transcript") || !j["transcript"].is_string()) {
      throw ParseError(file, line_no, "transcript", "expected a string");
    }
    r.transcript = j["transcript"].get<std::string>();
    if (!j.contains("decision") || !j["decision"].is_number()) {
      throw ParseError(file, line_no, "decision", "expected a number");
    }
    r.decision = j["decision"].get<double>();
    out.rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(file, 1, "schema", "missing header line");
  return out;
}

SelectionFile load_selection(const std::filesystem::path& path) {
  return parse_selection(io::read_file(path), path.string());
}

// ---------------------------------------------------------------------------

std::string correlation_text(std::span<const CorrelationColumn> columns) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Part of speech"};
  for (const auto& c : columns) header.push_back(c.label);
  rows.push_back(header);
  const std::size_t n = columns.empty() ? 0 : columns.front().rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{columns.front().rows[i].category};
    for (const auto& c : columns) row.push_back(format_cell(c.rows[i].r));
    rows.push_back(row);
  }
  return render_table(rows);
}

Json correlation_json(std::span<const CorrelationColumn> columns, std::uint64_t min_auto_count,
                      const RunManifest& manifest) {
  Json j = Json::object();
  j["report"] = "lexical_correlation";
  j["manifest"] = to_json(manifest);
  j["min_auto_count"] = min_auto_count;
  Json cols = Json::array();
  for (const auto& c : columns) {
    Json rows = Json::array();
    for (const auto& r : c.rows) {
      Json rj = Json::object();
      rj["category"] = r.category;
      rj["pos"] = r.pos ? Json(std::string(to_string(*r.pos))) : Json(nullptr);
      rj["r"] = number_or_null(r.r);
      rj["n_entries"] = r.n_entries;
      rj["mean_manual_count"] = report_round(r.mean_manual_count);
      rj["mean_automatic_count"] = report_round(r.mean_automatic_count);
      rows.push_back(rj);
    }
    cols.push_back(Json{{"label", c.label}, {"rows", rows}});
  }
  j["columns"] = cols;
  return j;
}

// ---------------------------------------------------------------------------

std::string stats_text(const DatasetStats& stats) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Corpus", "Recordings", "Utterances", "Minutes"});
  for (const auto& [corpus, c] : stats.per_corpus) {
    rows.push_back({corpus, std::to_string(c.recordings), std::to_string(c.utterances), io::fixed(c.minutes(), 1)});
  }
  rows.push_back({"Total", std::to_string(stats.total.recordings), std::to_string(stats.total.utterances),
                  io::fixed(stats.total.minutes(), 1)});
  return render_table(rows);
}

Json stats_json(const DatasetStats& stats) {
  auto one = [](const CorpusStats& c) {
    return Json{{"recordings", c.recordings}, {"utterances", c.utterances}, {"duration_ms", c.duration_ms},
                {"minutes", c.minutes()}};
  };
  Json per = Json::object();
  for (const auto& [corpus, c] : stats.per_corpus) per[corpus] = one(c);
  return Json{{"corpora", per}, {"total", one(stats.total)}};
}

ClassBalance class_balance(std::span<const RawExample> examples, double wer_threshold) {
  ClassBalance b;
  for (const auto& e : examples) {
    if (make_label(e.wer, wer_threshold) == WerClass::kLow) {
      ++b.low_count;
      b.low_ms += e.duration_ms;
    } else {
      ++b.high_count;
      b.high_ms += e.duration_ms;
    }
  }
  return b;
}

std::string class_balance_text(const ClassBalance& b) {
  const std::int64_t total = b.low_ms + b.high_ms;
  auto part = [&](const char* name, std::int64_t ms, std::size_t count) {
    const double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(ms) / static_cast<double>(total);
    return std::string(name) + ": " + io::fixed(static_cast<double>(ms) / 60000.0, 1) + " min (" +
           io::fixed(pct, 0) + "%), " + std::to_string(count) + " utterances";
  };
  return part("LOW", b.low_ms, b.low_count) + "; " + part("HIGH", b.high_ms, b.high_count);
}

}  // namespace asrsel
