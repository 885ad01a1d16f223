#include "cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "asrsel/classifier.hpp"
#include "asrsel/corpus.hpp"
#include "asrsel/error.hpp"
#include "asrsel/eval.hpp"
#include "asrsel/features.hpp"
#include "asrsel/io.hpp"
#include "asrsel/lexical.hpp"
#include "asrsel/report.hpp"
#include "asrsel/svg_plot.hpp"
#include "asrsel/synth.hpp"
#include "asrsel/tagger.hpp"

namespace fs = std::filesystem;

namespace asrsel::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative paths that do not exist here are looked up under ASRSEL_DATA_ROOT.
fs::path resolve(const std::string& arg) {
  fs::path p(arg);
  if (p.is_relative() && !fs::exists(p)) {
    if (const char* root = std::getenv("ASRSEL_DATA_ROOT"); root != nullptr && *root != '\0') {
      fs::path candidate = fs::path(root) / p;
      if (fs::exists(candidate)) return candidate;
    }
  }
  return p;
}

std::vector<fs::path> resolve_all(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const auto& a : args) out.push_back(resolve(a));
  return out;
}

struct PolicyArgs {
  bool keep_case = false;
  bool keep_punctuation = false;
  bool keep_markup = false;
  bool expand_contractions = false;
  bool spell_out_numerals = false;

  void add_to(CLI::App* app) {
    app->add_flag("--keep-case", keep_case, "Do not lowercase before comparing words");
    app->add_flag("--keep-punctuation", keep_punctuation, "Do not strip punctuation");
    app->add_flag("--keep-markup", keep_markup, "Keep bracketed annotation spans");
    app->add_flag("--expand-contractions", expand_contractions, "Expand informal contractions (gonna -> going to)");
    app->add_flag("--spell-out-numerals", spell_out_numerals, "Spell out digit tokens");
  }

  NormalizationPolicy policy() const {
    NormalizationPolicy p;
    p.lowercase = !keep_case;
    p.strip_punctuation = !keep_punctuation;
    p.drop_annotation_markup = !keep_markup;
    p.expand_contractions = expand_contractions;
    p.spell_out_numerals = spell_out_numerals;
    return p;
  }

  Json to_json() const {
    const auto p = policy();
    return Json{{"lowercase", p.lowercase},
                {"strip_punctuation", p.strip_punctuation},
                {"drop_annotation_markup", p.drop_annotation_markup},
                {"expand_contractions", p.expand_contractions},
                {"spell_out_numerals", p.spell_out_numerals}};
  }
};

struct DataArgs {
  std::vector<std::string> inputs;
  std::int64_t min_duration_ms = 300;

  void add_to(CLI::App* app, bool required = true) {
    auto* opt = app->add_option("inputs", inputs, "Record files or directories of *.jsonl files");
    if (required) opt->required();
    app->add_option("--min-duration-ms", min_duration_ms, "Drop utterances shorter than this")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  }

  std::vector<fs::path> paths() const { return resolve_all(inputs); }
  IngestOptions ingest() const { return IngestOptions{.min_duration_ms = min_duration_ms}; }

  Dataset load(std::ostream& err) const {
    const auto files = io::expand_inputs(paths());
    if (files.empty()) throw UsageError("no inputs: no record files found");
    Dataset ds = parse_manifest(paths(), ingest());
    for (const auto& w : ds.warnings()) err << "warning: " << w << "\n";
    return ds;
  }
};

struct TrainArgs {
  double fp_cost = 1.5;
  double fn_cost = 1.0;
  double regularization = 1.0;
  double wer_threshold = kDefaultWerThreshold;
  std::uint64_t seed = 0;

  void add_to(CLI::App* app, bool with_fp_cost = true) {
    if (with_fp_cost) {
      app->add_option("--fp-cost", fp_cost, "Cost of letting a high-WER utterance through")
          ->capture_default_str()
          ->check(CLI::PositiveNumber);
    }
    app->add_option("--fn-cost", fn_cost, "Cost of rejecting a low-WER utterance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--reg", regularization, "SVM regularization constant C")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--wer-threshold", wer_threshold, "Utterances with WER at or below this are LOW")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 10.0));
    app->add_option("--seed", seed, "Seed for the solver's visiting order")->capture_default_str();
  }

  TrainOptions options() const {
    TrainOptions o;
    o.fp_cost = fp_cost;
    o.fn_cost = fn_cost;
    o.regularization = regularization;
    o.wer_threshold = wer_threshold;
    o.seed = seed;
    return o;
  }

  Json to_json() const {
    return Json{{"fp_cost", fp_cost},
                {"fn_cost", fn_cost},
                {"regularization", regularization},
                {"wer_threshold", wer_threshold},
                {"seed", seed}};
  }
};

RunManifest make_manifest(std::string command, Json config, const std::vector<fs::path>& inputs,
                          std::optional<std::uint64_t> seed, bool record_time) {
  RunManifest m;
  m.command = std::move(command);
  m.config = std::move(config);
  add_input_checksums(m, inputs);
  m.seed = seed;
  if (record_time) m.created_at = current_timestamp();
  return m;
}

// Features come from a features file when given, otherwise they are
// assembled from the dataset. WER always comes from the dataset.
ExampleSet load_examples(const Dataset& ds, const std::optional<fs::path>& features, const NormalizationPolicy& policy,
                         std::ostream& err) {
  ExampleSet set;
  if (!features) {
    set = build_examples(ds, ExampleOptions{policy, policy});
  } else {
    for (const auto& row : load_features(*features)) {
      const UtteranceBundle* b = ds.find(row.utterance_id);
      if (b == nullptr) {
        set.skipped.push_back(row.utterance_id + ": not in the dataset");
        continue;
      }
      const auto wer = utterance_wer(*b, policy);
      if (!wer) {
        set.skipped.push_back(row.utterance_id + ": no reference or strong hypothesis");
        continue;
      }
      set.examples.push_back(
          RawExample{row.utterance_id, b->utterance.corpus, b->utterance.duration_ms(), *wer, row.features});
    }
  }
  if (!set.skipped.empty()) {
    err << "warning: " << set.skipped.size() << " utterance(s) not scored\n";
    for (const auto& s : set.skipped) err << "  " << s << "\n";
  }
  return set;
}

std::vector<fs::path> with_optional(std::vector<fs::path> files, const std::optional<fs::path>& extra) {
  if (extra) files.push_back(*extra);
  return files;
}

// ---------------------------------------------------------------------------

std::string peek_schema(const fs::path& path) {
  const std::string text = io::read_file(path);
  const std::string name = path.filename().string();
  std::size_t line_no = 0;
  for (std::string_view line : io::split_lines(text)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const LineContext where{name, line_no};
    return header_from_json(parse_json_line(line, where), where).schema;
  }
  return {};
}

int cmd_validate(const DataArgs& data, std::ostream& out, std::ostream& err) {
  Diagnostics diag;
  std::vector<fs::path> files;
  try {
    files = io::expand_inputs(data.paths());
  } catch (const Error& e) {
    diag.errors.emplace_back(e.what());
  }
  for (const auto& p : data.paths()) {
    if (!fs::exists(p)) diag.errors.push_back("input '" + p.string() + "' does not exist");
  }
  if (files.empty() && diag.errors.empty()) {
    err << "error: no inputs: no record files found\n";
    return kUsageError;
  }

  std::vector<fs::path> record_files;
  std::map<std::string, std::size_t> per_schema;
  for (const auto& f : files) {
    try {
      const std::string schema = peek_schema(f);
      if (schema.empty()) {
        diag.warnings.push_back(f.filename().string() + ": empty file");
        continue;
      }
      ++per_schema[schema];
      if (schema == schema::kUtterances || schema == schema::kHypotheses || schema == schema::kAlignment ||
          schema == schema::kAcoustics) {
        record_files.push_back(f);
      } else if (schema == schema::kFeatures) {
        load_features(f);
      } else if (schema == schema::kSelected) {
        load_selection(f);
      } else if (schema == schema::kTagged) {
        load_tagged(f);
      } else if (schema == schema::kTruth) {
        load_truth(f);
      } else if (schema == schema::kSkipLog) {
        load_skip_log(f);
      } else {
        diag.errors.push_back(f.filename().string() + ":1: field 'schema': unsupported schema '" + schema + "'");
      }
    } catch (const Error& e) {
      diag.errors.emplace_back(e.what());
    }
  }
  Dataset ds;
  if (!record_files.empty()) ds = load_with_diagnostics(record_files, data.ingest(), diag);

  for (const auto& [schema, count] : per_schema) out << schema << ": " << count << " file(s)\n";
  out << "utterances: " << ds.size() << " (" << ds.dropped_short() << " below " << data.min_duration_ms
      << " ms dropped)\n";
  out << "errors: " << diag.errors.size() << "\n";
  for (const auto& e : diag.errors) out << "  " << e << "\n";
  out << "warnings: " << diag.warnings.size() << "\n";
  for (const auto& w : diag.warnings) out << "  " << w << "\n";
  return diag.ok() ? kOk : kDataError;
}

int cmd_featurize(const DataArgs& data, const PolicyArgs& policy, const std::string& output, bool record_time,
                  std::ostream& out, std::ostream& err) {
  const Dataset ds = data.load(err);
  std::vector<FeatureRow> rows;
  std::vector<std::string> failures;
  for (const auto& [id, bundle] : ds.utterances()) {
    try {
      rows.push_back(FeatureRow{id, assemble(bundle, policy.policy())});
    } catch (const Error& e) {
      failures.push_back(id + ": " + e.what());
    }
  }
  if (ds.empty()) err << "warning: dataset is empty; writing an empty features file\n";
  Json config{{"normalization", policy.to_json()}, {"min_duration_ms", data.min_duration_ms}};
  const auto manifest =
      make_manifest("featurize", config, io::expand_inputs(data.paths()), std::nullopt, record_time);
  io::write_file_atomic(output, features_document(rows, manifest));
  out << "featurized " << rows.size() << " of " << ds.size() << " utterances\n";
  for (const auto& f : failures) err << "error: " << f << "\n";
  return failures.empty() ? kOk : kDataError;
}

int cmd_train(const DataArgs& data, const PolicyArgs& policy, const TrainArgs& train,
              const std::optional<std::string>& features, const std::string& output, bool record_time,
              std::ostream& out, std::ostream& err) {
  const Dataset ds = data.load(err);
  const auto features_path = features ? std::optional<fs::path>(resolve(*features)) : std::nullopt;
  const ExampleSet set = load_examples(ds, features_path, policy.policy(), err);
  const auto balance = class_balance(set.examples, train.wer_threshold);
  out << "class balance: " << class_balance_text(balance) << "\n";

  const ReliabilityModel model = train_from_raw(set.examples, train.options());
  Json config = train.to_json();
  config["normalization"] = policy.to_json();
  config["min_duration_ms"] = data.min_duration_ms;
  const auto manifest = make_manifest("train", config, with_optional(io::expand_inputs(data.paths()), features_path),
                                      train.seed, record_time);
  Json j = model_to_json(model);
  j["manifest"] = to_json(manifest);
  io::write_file_atomic(output, j.dump(2) + "\n");
  out << "trained on " << set.examples.size() << " utterances in " << model.epochs << " epochs"
      << (model.converged ? "" : " (not converged)") << "\n";
  return kOk;
}

int cmd_select(const DataArgs& data, const PolicyArgs& policy, const std::string& model_path,
               const std::optional<std::string>& features, const std::string& output, bool record_time,
               std::ostream& out, std::ostream& err) {
  const ReliabilityModel model = load_model(resolve(model_path));
  const auto& names = feature_names();
  if (model.feature_names.size() != names.size() ||
      !std::equal(model.feature_names.begin(), model.feature_names.end(), names.begin())) {
    throw DataError("model feature names do not match this tool's features");
  }
  const Dataset ds = data.load(err);

  std::vector<FeatureRow> rows;
  const auto features_path = features ? std::optional<fs::path>(resolve(*features)) : std::nullopt;
  if (features_path) {
    rows = load_features(*features_path);
  } else {
    for (const auto& [id, bundle] : ds.utterances()) {
      if (bundle.weak || bundle.strong) rows.push_back(FeatureRow{id, assemble(bundle, policy.policy())});
    }
  }

  SelectionSummary summary;
  std::vector<SelectedRow> selected;
  for (const auto& row : rows) {
    const UtteranceBundle* b = ds.find(row.utterance_id);
    if (b == nullptr) throw DataError("utterance '" + row.utterance_id + "' is not in the dataset");
    const Prediction p = predict(model, row.features);
    ++summary.utterances;
    summary.duration_ms += b->utterance.duration_ms();
    if (p.label == WerClass::kLow) {
      ++summary.selected;
      summary.selected_duration_ms += b->utterance.duration_ms();
      selected.push_back(SelectedRow{row.utterance_id, b->strong ? b->strong->transcript() : std::string(), p.decision});
    }
  }
  Json config{{"model", fs::path(model_path).filename().string()},
              {"fp_cost", model.fp_cost},
              {"wer_threshold", model.wer_threshold},
              {"normalization", policy.to_json()}};
  const auto manifest =
      make_manifest("select", config, with_optional(io::expand_inputs(data.paths()), features_path), model.seed,
                    record_time);
  io::write_file_atomic(output, selection_document(selected, summary, manifest));
  out << selection_summary_line(summary) << "\n";
  return kOk;
}

struct ReportArgs {
  std::string json_output;
  std::optional<std::string> table_output;
  std::optional<std::string> features;
  unsigned threads = 1;
  bool record_time = false;
};

int cmd_cv(const DataArgs& data, const PolicyArgs& policy, const TrainArgs& train, const ReportArgs& report,
           std::ostream& out, std::ostream& err) {
  const Dataset ds = data.load(err);
  const auto features_path = report.features ? std::optional<fs::path>(resolve(*report.features)) : std::nullopt;
  const ExampleSet set = load_examples(ds, features_path, policy.policy(), err);
  const CvResult result = run_cv(set.examples, CvConfig{train.options(), report.threads});
  Json config = train.to_json();
  config["normalization"] = policy.to_json();
  config["min_duration_ms"] = data.min_duration_ms;
  const auto manifest = make_manifest("cv", config, with_optional(io::expand_inputs(data.paths()), features_path),
                                      train.seed, report.record_time);
  const std::string text = cv_report_text(result);
  io::write_file_atomic(report.json_output, cv_report_json(result, manifest).dump(2) + "\n");
  if (report.table_output) io::write_file_atomic(*report.table_output, text);
  out << text;
  return kOk;
}

int cmd_sweep(const DataArgs& data, const PolicyArgs& policy, const TrainArgs& train,
              const std::vector<double>& grid, const ReportArgs& report, std::ostream& out, std::ostream& err) {
  const Dataset ds = data.load(err);
  const auto features_path = report.features ? std::optional<fs::path>(resolve(*report.features)) : std::nullopt;
  const ExampleSet set = load_examples(ds, features_path, policy.policy(), err);
  const SweepResult result = sweep_fp_cost(set.examples, grid, CvConfig{train.options(), report.threads});
  Json config = train.to_json();
  config.erase("fp_cost");
  config["grid"] = grid;
  config["normalization"] = policy.to_json();
  config["min_duration_ms"] = data.min_duration_ms;
  const auto manifest = make_manifest("sweep", config, with_optional(io::expand_inputs(data.paths()), features_path),
                                      train.seed, report.record_time);
  const std::string text = sweep_report_text(result);
  io::write_file_atomic(report.json_output, sweep_report_json(result, manifest).dump(2) + "\n");
  if (report.table_output) io::write_file_atomic(*report.table_output, text);
  out << text;
  return kOk;
}

struct LexArgs {
  std::vector<std::string> selected;
  std::optional<std::string> tagged;
  std::uint64_t min_auto_count = 5;
  std::vector<std::string> pos;
  std::size_t label_limit = 30;
  std::string out_dir;
  bool record_time = false;
};

std::string selection_label(const SelectionFile& file, const fs::path& path) {
  const Json& h = file.header;
  if (h.contains("manifest") && h["manifest"].contains("config") && h["manifest"]["config"].contains("fp_cost") &&
      h["manifest"]["config"]["fp_cost"].is_number()) {
    return "FP cost = " + io::fixed(h["manifest"]["config"]["fp_cost"].get<double>(), 1);
  }
  return path.stem().string();
}

int cmd_lexstats(const DataArgs& data, const PolicyArgs& policy, const LexArgs& lex, std::ostream& out,
                 std::ostream& err) {
  std::optional<std::set<Pos>> pos_filter;
  for (const auto& tag : lex.pos) {
    const auto p = parse_pos(tag);
    if (!p || to_string(*p) != tag) throw UsageError("--pos: unknown part-of-speech tag '" + tag + "'");
    if (!pos_filter) pos_filter.emplace();
    pos_filter->insert(*p);
  }

  const Dataset ds = data.load(err);
  std::optional<TaggedCorpus> tagged;
  std::vector<fs::path> inputs = io::expand_inputs(data.paths());
  if (lex.tagged) {
    const fs::path p = resolve(*lex.tagged);
    tagged = load_tagged(p);
    inputs.push_back(p);
  }
  const auto pairs = build_transcript_pairs(ds, policy.policy(), tagged ? &*tagged : nullptr);

  std::vector<CorrelationColumn> columns;
  const FrequencyTable all = count_lemmas(pairs);
  columns.push_back({"No sample selection", correlation_table(all)});
  std::optional<FrequencyTable> first_selected;
  for (const auto& s : lex.selected) {
    const fs::path p = resolve(s);
    const SelectionFile file = load_selection(p);
    inputs.push_back(p);
    std::set<std::string> ids;
    for (const auto& r : file.rows) ids.insert(r.utterance_id);
    FrequencyTable t = count_lemmas(pairs, Scope::kSelectedUtterances, ids);
    columns.push_back({selection_label(file, p), correlation_table(t)});
    if (!first_selected) first_selected = std::move(t);
  }

  const FrequencyTable& scope_table = first_selected ? *first_selected : all;
  ScatterData scatter = scatter_data(scope_table, lex.min_auto_count, pos_filter, lex.label_limit);
  scatter.title = first_selected ? "Selected utterances (" + columns[1].label + ")" : "All utterances";

  Json config{{"min_auto_count", lex.min_auto_count},
              {"pos", lex.pos},
              {"label_limit", lex.label_limit},
              {"normalization", policy.to_json()},
              {"min_duration_ms", data.min_duration_ms}};
  const auto manifest = make_manifest("lexstats", config, inputs, std::nullopt, lex.record_time);
  Json report = correlation_json(columns, lex.min_auto_count, manifest);
  auto line_json = [](const std::optional<FittedLine>& l) {
    if (!l) return Json(nullptr);
    return Json{{"intercept", report_round(l->intercept)},
                {"slope", report_round(l->slope)},
                {"r", l->r ? Json(report_round(*l->r)) : Json(nullptr)},
                {"n", l->n}};
  };
  report["scatter"] = Json{{"scope", scatter.title},
                           {"points", scatter.points.size()},
                           {"all_words", line_json(scatter.all_line)},
                           {"filtered", line_json(scatter.filtered_line)}};

  const fs::path dir(lex.out_dir);
  const std::string text = correlation_text(columns);
  io::write_file_atomic(dir / "frequencies.tsv", frequency_tsv(scope_table));
  io::write_file_atomic(dir / "correlation.json", report.dump(2) + "\n");
  io::write_file_atomic(dir / "correlation.txt", text);
  io::write_file_atomic(dir / "scatter.svg", render_scatter_svg(scatter));
  out << text;
  out << "scatter: " << scatter.points.size() << " lemmas, all words r = "
      << format_cell(scatter.all_line ? scatter.all_line->r : std::nullopt) << ", automatic count >= "
      << lex.min_auto_count << " r = " << format_cell(scatter.filtered_line ? scatter.filtered_line->r : std::nullopt)
      << "\n";
  return kOk;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const SynthConfig config = load_synth_config(resolve(config_path));
  const SynthOutput output = generate(config);
  write_synth(output, out_dir);
  std::int64_t total_ms = 0;
  std::int64_t low_ms = 0;
  for (std::size_t i = 0; i < output.utterances.size(); ++i) {
    const auto ms = output.utterances[i].duration_ms();
    total_ms += ms;
    if (make_label(output.truth[i].wer()) == WerClass::kLow) low_ms += ms;
  }
  out << "generated " << output.utterances.size() << " utterances in " << config.corpora << " corpora, "
      << io::fixed(static_cast<double>(total_ms) / 60000.0, 1) << " min, low-WER "
      << io::fixed(static_cast<double>(low_ms) / 60000.0, 1) << " min\n";
  return kOk;
}

int cmd_stats(const DataArgs& data, const std::optional<std::string>& json_output, std::ostream& out,
              std::ostream& err) {
  const Dataset ds = data.load(err);
  const DatasetStats stats = dataset_stats(ds);
  if (json_output) io::write_file_atomic(*json_output, stats_json(stats).dump(2) + "\n");
  out << stats_text(stats);
  if (ds.dropped_short() > 0) {
    out << ds.dropped_short() << " utterance(s) shorter than " << data.min_duration_ms << " ms excluded\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Select reliable ASR transcripts and analyse them", "asrsel"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  bool record_time = false;
  app.add_flag("--record-time", record_time, "Store the run time in report manifests");

  // validate
  DataArgs validate_data;
  auto* validate = app.add_subcommand("validate", "Schema-check record files");
  validate_data.add_to(validate);

  // featurize
  DataArgs feat_data;
  PolicyArgs feat_policy;
  std::string feat_output;
  auto* featurize = app.add_subcommand("featurize", "Write one feature vector per utterance");
  feat_data.add_to(featurize);
  feat_policy.add_to(featurize);
  featurize->add_option("-o,--output", feat_output, "Features file to write")->required();

  // train
  DataArgs train_data;
  PolicyArgs train_policy;
  TrainArgs train_args;
  std::optional<std::string> train_features;
  std::string train_output;
  auto* train = app.add_subcommand("train", "Train the reliability classifier");
  train_data.add_to(train);
  train_policy.add_to(train);
  train_args.add_to(train);
  train->add_option("--features", train_features, "Features file (default: assemble from the inputs)");
  train->add_option("-o,--output", train_output, "Model file to write")->required();

  // select
  DataArgs select_data;
  PolicyArgs select_policy;
  std::string select_model;
  std::optional<std::string> select_features;
  std::string select_output;
  auto* select = app.add_subcommand("select", "Keep the transcripts predicted to have low WER");
  select_data.add_to(select);
  select_policy.add_to(select);
  select->add_option("--model", select_model, "Model file")->required();
  select->add_option("--features", select_features, "Features file (default: assemble from the inputs)");
  select->add_option("-o,--output", select_output, "Selection file to write")->required();

  // cv / sweep
  DataArgs cv_data;
  PolicyArgs cv_policy;
  TrainArgs cv_train;
  ReportArgs cv_report;
  auto* cv = app.add_subcommand("cv", "Leave-one-corpus-out cross-validation");
  cv_data.add_to(cv);
  cv_policy.add_to(cv);
  cv_train.add_to(cv);
  cv->add_option("--features", cv_report.features, "Features file (default: assemble from the inputs)");
  cv->add_option("-o,--output", cv_report.json_output, "JSON report to write")->required();
  cv->add_option("--table", cv_report.table_output, "Also write the text table here");
  cv->add_option("--threads", cv_report.threads, "Folds trained in parallel")->check(CLI::PositiveNumber);

  DataArgs sweep_data;
  PolicyArgs sweep_policy;
  TrainArgs sweep_train;
  ReportArgs sweep_report;
  std::vector<double> grid{1.0, 1.5, 2.0, 2.2, 2.5};
  auto* sweep = app.add_subcommand("sweep", "Cross-validate over a grid of false-positive costs");
  sweep_data.add_to(sweep);
  sweep_policy.add_to(sweep);
  sweep_train.add_to(sweep, false);
  sweep->add_option("--grid", grid, "Comma-separated FP costs")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--features", sweep_report.features, "Features file (default: assemble from the inputs)");
  sweep->add_option("-o,--output", sweep_report.json_output, "JSON report to write")->required();
  sweep->add_option("--table", sweep_report.table_output, "Also write the text table here");
  sweep->add_option("--threads", sweep_report.threads, "Folds trained in parallel")->check(CLI::PositiveNumber);

  // lexstats
  DataArgs lex_data;
  PolicyArgs lex_policy;
  LexArgs lex;
  auto* lexstats = app.add_subcommand("lexstats", "Compare lemma frequencies of manual and automatic transcripts");
  lex_data.add_to(lexstats);
  lex_policy.add_to(lexstats);
  lexstats->add_option("--selected", lex.selected, "Selection file(s); one table column each");
  lexstats->add_option("--tagged", lex.tagged, "Pre-tagged transcripts replacing the built-in tagger");
  lexstats->add_option("--min-auto-count", lex.min_auto_count, "Automatic-count cutoff for the filtered line")
      ->capture_default_str();
  lexstats->add_option("--pos", lex.pos, "Restrict the scatter plot to these UPOS tags")->delimiter(',');
  lexstats->add_option("--label-limit", lex.label_limit, "Maximum number of labeled points")->capture_default_str();
  lexstats->add_option("--out-dir", lex.out_dir, "Directory for the frequency, correlation and plot files")
      ->required();

  // synth
  std::string synth_config;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset from a config file");
  synth->add_option("config", synth_config, "Synthetic dataset config (JSON)")->required();
  synth->add_option("--out-dir", synth_out, "Directory for the generated record files")->required();

  // stats
  DataArgs stats_data;
  std::optional<std::string> stats_json_out;
  auto* stats = app.add_subcommand("stats", "Per-corpus utterance counts and durations");
  stats_data.add_to(stats);
  stats->add_option("--json", stats_json_out, "Also write the summary as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (*validate) return cmd_validate(validate_data, out, err);
    if (*featurize) return cmd_featurize(feat_data, feat_policy, feat_output, record_time, out, err);
    if (*train) {
      return cmd_train(train_data, train_policy, train_args, train_features, train_output, record_time, out, err);
    }
    if (*select) {
      return cmd_select(select_data, select_policy, select_model, select_features, select_output, record_time, out,
                        err);
    }
    if (*cv) {
      cv_report.record_time = record_time;
      return cmd_cv(cv_data, cv_policy, cv_train, cv_report, out, err);
    }
    if (*sweep) {
      sweep_report.record_time = record_time;
      return cmd_sweep(sweep_data, sweep_policy, sweep_train, grid, sweep_report, out, err);
    }
    if (*lexstats) {
      lex.record_time = record_time;
      return cmd_lexstats(lex_data, lex_policy, lex, out, err);
    }
    if (*synth) return cmd_synth(synth_config, synth_out, out);
    if (*stats) return cmd_stats(stats_data, stats_json_out, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace asrsel::cli
