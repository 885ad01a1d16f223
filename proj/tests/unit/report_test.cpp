#include "asrsel/report.hpp"

#include <gtest/gtest.h>

#include <regex>

#include "asrsel/error.hpp"
#include "test_support.hpp"

namespace asrsel {
namespace {

std::vector<RawExample> fixture_examples() {
  static const auto examples = build_examples(parse_manifest({testing::fixture("synth/data")})).examples;
  return examples;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(' ');
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(' ') - a + 1);
}

// Slices a rendered table into cells using the column starts found on
// `header_line`. Em dashes are folded to one byte first so offsets line up.
std::vector<std::vector<std::string>> slice_table(const std::string& text, std::size_t header_line) {
  const std::string folded = replace_all(text, std::string(kUndefined), "~");
  std::vector<std::string> lines;
  for (auto l : io::split_lines(folded)) lines.emplace_back(l);
  const std::string& h = lines.at(header_line);
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 2; i < h.size(); ++i) {
    if (h[i] != ' ' && h[i - 1] == ' ' && h[i - 2] == ' ') starts.push_back(i);
  }
  std::vector<std::vector<std::string>> out;
  for (std::size_t k = header_line; k < lines.size(); ++k) {
    std::vector<std::string> cells;
    for (std::size_t c = 0; c < starts.size(); ++c) {
      const std::size_t end = c + 1 < starts.size() ? starts[c + 1] : std::string::npos;
      cells.push_back(starts[c] < lines[k].size() ? trim(lines[k].substr(starts[c], end - starts[c])) : "");
    }
    out.push_back(cells);
  }
  return out;
}

std::string cell_of(const Json& v, int decimals) {
  return v.is_null() ? "~" : io::fixed(v.get<double>(), decimals);
}

TEST(Report, Rounding) {
  EXPECT_EQ(report_round(0.1234565), 0.123457);
  EXPECT_EQ(report_round(-1e-9), 0.0);
  EXPECT_FALSE(std::signbit(report_round(-1e-9)));
  EXPECT_EQ(format_cell(std::nullopt), std::string(kUndefined));
  EXPECT_EQ(format_cell(0.785), "0.79");
  EXPECT_EQ(format_cell(0.125, 1), "0.1");
}

TEST(Report, TableWidthsCountCodePoints) {
  const std::string dash(kUndefined);
  EXPECT_EQ(render_table({{"a", "bb"}, {dash, "c"}}), "a  bb\n" + dash + "  c\n");
}

TEST(Report, CvTextAndJsonCarryTheSameNumbers) {
  CvConfig config;
  config.train.fp_cost = 1.5;
  const auto cv = run_cv(fixture_examples(), config);
  RunManifest manifest;
  manifest.command = "cv";
  const Json j = Json::parse(cv_report_json(cv, manifest).dump());
  const std::string text = cv_report_text(cv);
  ASSERT_EQ(text.rfind("FP cost = 1.5\n", 0), 0u);
  const auto table = slice_table(text, 2);
  ASSERT_EQ(table.front().size(), 11u);
  EXPECT_EQ(table.front()[0], "Test corpus");
  ASSERT_EQ(table.size(), 1 + cv.folds.size() + 1);

  auto check_row = [&](const std::vector<std::string>& row, const Json& sel, const Json& base) {
    EXPECT_EQ(row[2], cell_of(sel["precision"], 2));
    EXPECT_EQ(row[3], cell_of(sel["recall_count"], 2));
    EXPECT_EQ(row[4], cell_of(sel["recall_duration"], 2));
    EXPECT_EQ(row[5], cell_of(sel["wer_median_selected"], 2));
    EXPECT_EQ(row[6], cell_of(sel["wer_mean_selected"], 2));
    EXPECT_EQ(row[7], cell_of(base["wer_median_all"], 2));
    EXPECT_EQ(row[8], cell_of(base["wer_mean_all"], 2));
    EXPECT_EQ(row[9], cell_of(sel["pct_transcribed_duration"], 1));
    EXPECT_EQ(row[10], cell_of(sel["pct_transcribed_count"], 1));
  };
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    const auto& row = table[1 + f];
    const Json& fj = j["folds"][f];
    EXPECT_EQ(row[0], fj["test_corpus"].get<std::string>());
    std::string train;
    for (const auto& c : fj["train_corpora"]) train += (train.empty() ? "" : ", ") + c.get<std::string>();
    EXPECT_EQ(row[1], train);
    check_row(row, fj["selected"], fj["no_selection"]);
  }
  EXPECT_EQ(table.back()[0], "Mean");
  check_row(table.back(), j["mean"], j["mean_no_selection"]);
  EXPECT_EQ(j["report"], "cross_validation");
  EXPECT_EQ(j["manifest"]["command"], "cv");
}

TEST(Report, SweepTextAndJsonCarryTheSameNumbers) {
  const std::vector<double> grid{1.0, 1.5, 2.0, 2.2, 2.5};
  const auto sweep = sweep_fp_cost(fixture_examples(), grid, {});
  const Json j = sweep_report_json(sweep, {});
  const auto table = slice_table(sweep_report_text(sweep), 0);
  ASSERT_EQ(table.size(), 1 + 1 + grid.size());
  EXPECT_EQ(table[1][0], "no selection");
  EXPECT_EQ(table[1][1], "~");
  EXPECT_EQ(table[1][6], "100.0");
  ASSERT_EQ(j["rows"].size(), grid.size());
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const auto& row = table[2 + r];
    const Json& m = j["rows"][r]["mean"];
    EXPECT_EQ(row[0], io::fixed(grid[r], 1));
    EXPECT_EQ(row[1], cell_of(m["precision"], 2));
    EXPECT_EQ(row[2], cell_of(m["recall_count"], 2));
    EXPECT_EQ(row[3], cell_of(m["recall_duration"], 2));
    EXPECT_EQ(row[4], cell_of(m["wer_median_selected"], 2));
    EXPECT_EQ(row[5], cell_of(m["wer_mean_selected"], 2));
    EXPECT_EQ(row[6], cell_of(m["pct_transcribed_duration"], 1));
    EXPECT_EQ(row[7], cell_of(m["pct_transcribed_count"], 1));
  }
}

TEST(Report, UndefinedCellsRenderAsDash) {
  CvResult cv;
  cv.fp_cost = 2.5;
  FoldResult f;
  f.test_corpus = "A";
  f.train_corpora = {"B"};
  f.metrics.recall_count = 0.0;
  cv.folds.push_back(f);
  cv.mean = f.metrics;
  const std::string text = cv_report_text(cv);
  EXPECT_NE(text.find(std::string(kUndefined)), std::string::npos);
  const Json j = cv_report_json(cv, {});
  EXPECT_TRUE(j["folds"][0]["selected"]["precision"].is_null());
  EXPECT_EQ(j["folds"][0]["selected"]["recall_count"], 0.0);
}

TEST(Manifest, RoundTripAndChecksums) {
  testing::TempDir dir;
  testing::spit(dir / "a.txt", "abc");
  RunManifest m;
  m.command = "train";
  m.config = Json{{"fp_cost", 1.5}};
  m.seed = 3;
  m.created_at = "2020-01-01T00:00:00Z";
  add_input_checksums(m, {dir / "a.txt"});
  ASSERT_EQ(m.inputs.size(), 1u);
  EXPECT_EQ(m.inputs[0].first, "a.txt");
  EXPECT_EQ(m.inputs[0].second, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(manifest_from_json(to_json(m)), m);
  EXPECT_EQ(to_json(RunManifest{})["created_at"], nullptr);
  EXPECT_THROW(manifest_from_json(Json::object()), Error);
}

TEST(Manifest, TimestampHonoursSourceDateEpoch) {
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(current_timestamp(), "1970-01-02T00:00:00Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_TRUE(std::regex_match(current_timestamp(), std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
}

TEST(FeaturesFile, RoundTrip) {
  const auto ds = parse_manifest({testing::fixture("synth/data")});
  std::vector<FeatureRow> rows;
  for (const auto& [id, b] : ds.utterances()) rows.push_back({id, assemble(b)});
  rows[1].features.values[kSnrDb].reset();
  const std::string doc = features_document(rows, {});
  EXPECT_EQ(parse_features(doc), rows);
  EXPECT_EQ(features_document(parse_features(doc), {}), doc);
}

TEST(FeaturesFile, Validation) {
  const std::string header = features_document({}, {});
  EXPECT_TRUE(parse_features(header).empty());
  const std::string nulls = "[null,null,null,null,null,null,null,null,null,null,null,null]";
  const std::string falses = "[false,false,false,false,false,false,false,false,false,false,false,false]";
  auto row = [&](const std::string& id, const std::string& values, const std::string& mask) {
    return R"({"utterance_id":")" + id + R"(","values":)" + values + R"(,"mask":)" + mask + "}\n";
  };
  EXPECT_EQ(parse_features(header + row("a", nulls, falses)).size(), 1u);
  auto field_of = [](const std::string& text) {
    try {
      parse_features(text, "f.jsonl");
    } catch (const ParseError& e) {
      return std::to_string(e.line()) + ":" + e.field();
    }
    return std::string("ok");
  };
  EXPECT_EQ(field_of(header + row("a", nulls, falses) + row("a", nulls, falses)), "3:utterance_id");
  EXPECT_EQ(field_of(header + row("a", "[1]", falses)), "2:values");
  std::string mask = falses;
  mask.replace(1, 5, "true");
  EXPECT_EQ(field_of(header + row("a", nulls, mask)), "2:mask");
  std::string values = nulls;
  values.replace(1, 4, "1.5");
  EXPECT_EQ(field_of(header + row("a", values, falses)), "2:mask");
  EXPECT_EQ(field_of(R"({"schema":"utterances","version":1})" "\n"), "1:schema");
  EXPECT_EQ(field_of(""), "1:schema");
  std::string renamed = header;
  renamed.replace(renamed.find("snr_db"), 6, "snr_xx");
  EXPECT_EQ(field_of(renamed), "1:feature_names");
}

TEST(SelectionFile, RoundTripAndSummary) {
  const std::vector<SelectedRow> rows{{"a", "hello there", 0.5}, {"b", "", 1.25}};
  SelectionSummary s{4, 2, 120000, 30000};
  const std::string doc = selection_document(rows, s, {});
  const auto back = parse_selection(doc);
  EXPECT_EQ(back.rows, rows);
  EXPECT_EQ(back.header["summary"]["pct_duration_selected"], 25.0);
  EXPECT_EQ(back.header["summary"]["pct_count_selected"], 50.0);
  EXPECT_EQ(selection_summary_line(s), "selected 2 of 4 utterances, 0.5 of 2.0 min (25.0% of duration)");
  const SelectionSummary empty{};
  EXPECT_EQ(empty.pct_duration_selected(), 0.0);
  EXPECT_TRUE(parse_selection(selection_document({}, empty, {})).rows.empty());
  EXPECT_THROW(parse_selection(R"({"schema":"selected","version":1})" "\n" R"({"utterance_id":"a"})" "\n"),
               ParseError);
}

TEST(Correlation, TextAndJsonAgree) {
  FrequencyTable t;
  t.entries[{"a", Pos::kNoun}] = {10, 10};
  t.entries[{"b", Pos::kNoun}] = {100, 60};
  t.entries[{"c", Pos::kVerb}] = {5, 9};
  t.entries[{"d", Pos::kVerb}] = {1, 0};
  const std::vector<CorrelationColumn> cols{{"No sample selection", correlation_table(t, 0)},
                                            {"FP cost = 2.0", correlation_table(t, 5)}};
  const Json j = correlation_json(cols, 5, {});
  const auto table = slice_table(correlation_text(cols), 0);
  ASSERT_EQ(table.size(), 7u);
  EXPECT_EQ(table[0], (std::vector<std::string>{"Part of speech", "No sample selection", "FP cost = 2.0"}));
  for (std::size_t r = 0; r < 6; ++r) {
    EXPECT_EQ(table[1 + r][0], j["columns"][0]["rows"][r]["category"].get<std::string>());
    for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(table[1 + r][1 + c], cell_of(j["columns"][c]["rows"][r]["r"], 2));
  }
  EXPECT_EQ(table[4][1], "~");  // adjectives: no entries
}

TEST(Stats, TextLayoutAndBalance) {
  const auto stats = dataset_stats(parse_manifest({testing::fixture("ingest")}, {0}));
  EXPECT_EQ(stats_text(stats),
            "Corpus  Recordings  Utterances  Minutes\n"
            "BER     1           2           0.0\n"
            "LUC     1           2           0.0\n"
            "Total   2           4           0.0\n");
  EXPECT_EQ(stats_json(stats)["total"]["duration_ms"], 1199);

  std::vector<RawExample> ex(3);
  ex[0].wer = 0.0;
  ex[0].duration_ms = 72 * 60000;
  ex[1].wer = 0.5;
  ex[1].duration_ms = 100 * 60000;
  ex[2].wer = 0.3;
  ex[2].duration_ms = 0;
  const auto b = class_balance(ex, 0.3);
  EXPECT_EQ(b.low_count, 2u);
  EXPECT_EQ(class_balance_text(b), "LOW: 72.0 min (42%), 2 utterances; HIGH: 100.0 min (58%), 1 utterances");
}

}  // namespace
}  // namespace asrsel
