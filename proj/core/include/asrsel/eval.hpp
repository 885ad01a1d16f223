#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrsel/classifier.hpp"
#include "asrsel/corpus.hpp"
#include "asrsel/text_normalize.hpp"

namespace asrsel {

struct ExampleOptions {
  /// Applied to the reference and the strong hypothesis before scoring WER.
  NormalizationPolicy wer_policy;
  /// Applied to both hypotheses before computing the divergence feature.
  NormalizationPolicy feature_policy;
};

struct ExampleSet {
  std::vector<RawExample> examples;  // utterance-id order
  /// "id: reason" for every utterance that could not be scored or featurized.
  std::vector<std::string> skipped;
};

/// Scores WER against the reference and assembles features for every
/// utterance that has a non-empty normalized reference and a strong
/// hypothesis.
ExampleSet build_examples(const Dataset& dataset, const ExampleOptions& options = {});

/// Scores the strong hypothesis of one bundle; nullopt when WER is undefined.
std::optional<double> utterance_wer(const UtteranceBundle& bundle, const NormalizationPolicy& policy = {});

struct Fold {
  std::string test_corpus;
  std::vector<std::string> train_corpora;  // sorted
  std::vector<std::size_t> train;          // indices into the item list
  std::vector<std::size_t> test;
};

/// One fold per distinct corpus tag, in tag order. Throws DataError when fewer
/// than two corpora are present.
std::vector<Fold> loco_folds(std::span<const std::string> corpus_of_item);
std::vector<Fold> loco_folds(std::span<const RawExample> examples);
/// Items are the dataset's utterances in id order.
std::vector<Fold> loco_folds(const Dataset& dataset);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

/// Selection quality over the LOW (selected) class. Undefined values are
/// empty optionals and render as kUndefined.
struct SelectionMetrics {
  std::optional<double> precision;
  std::optional<double> recall_count;
  std::optional<double> recall_duration;
  std::optional<double> wer_median_selected;
  std::optional<double> wer_mean_selected;
  std::optional<double> wer_median_all;
  std::optional<double> wer_mean_all;
  double pct_duration_selected = 0.0;
  double pct_count_selected = 0.0;
  ConfusionCounts counts;
  std::size_t utterances = 0;
  std::int64_t duration_ms = 0;
  std::int64_t selected_duration_ms = 0;
};

/// Throws DataError for an empty test set or mismatched lengths.
SelectionMetrics evaluate_selection(std::span<const LabeledExample> test, std::span<const WerClass> predictions);

std::optional<double> median(std::vector<double> values);

/// Unweighted mean across folds. A metric is undefined in the mean when it is
/// undefined in any fold. Counts and durations are summed.
SelectionMetrics mean_of(std::span<const SelectionMetrics> rows);

struct FoldResult {
  std::string test_corpus;
  std::vector<std::string> train_corpora;
  SelectionMetrics metrics;
  /// Metrics when every test utterance is kept (the no-selection baseline).
  SelectionMetrics baseline;
};

struct CvConfig {
  TrainOptions train;
  /// Folds are trained on this many threads; results do not depend on it.
  unsigned threads = 1;
};

struct CvResult {
  double fp_cost = 0.0;
  std::vector<FoldResult> folds;
  std::vector<ReliabilityModel> models;  // parallel to folds
  SelectionMetrics mean;
  SelectionMetrics baseline_mean;
  /// All test predictions pooled across folds.
  SelectionMetrics pooled;
};

/// Fits the standardizer and the model on the fold's training items only.
ReliabilityModel train_fold(std::span<const RawExample> examples, const Fold& fold, const TrainOptions& options);

CvResult run_cv(std::span<const RawExample> examples, const CvConfig& config);

struct SweepResult {
  SelectionMetrics baseline;
  std::vector<CvResult> rows;  // grid order
};

/// Runs cross-validation once per fp_cost with identical folds and seed.
/// Throws DataError for an empty grid.
SweepResult sweep_fp_cost(std::span<const RawExample> examples, std::span<const double> grid,
                          const CvConfig& config);

}  // namespace asrsel
