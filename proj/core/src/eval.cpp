#include "asrsel/eval.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>

#include "asrsel/align.hpp"
#include "asrsel/error.hpp"

namespace asrsel {

std::optional<double> utterance_wer(const UtteranceBundle& bundle, const NormalizationPolicy& policy) {
  if (!bundle.utterance.reference || !bundle.strong) return std::nullopt;
  const auto ref = normalize(*bundle.utterance.reference, policy);
  if (ref.empty()) return std::nullopt;
  const auto hyp = normalize(bundle.strong->transcript(), policy);
  return wer(ref, hyp);
}

ExampleSet build_examples(const Dataset& dataset, const ExampleOptions& options) {
  ExampleSet set;
  for (const auto& [id, bundle] : dataset.utterances()) {
    if (!bundle.utterance.reference) {
      set.skipped.push_back(id + ": no reference transcript");
      continue;
    }
    if (!bundle.strong) {
      set.skipped.push_back(id + ": no strong hypothesis");
      continue;
    }
    auto w = utterance_wer(bundle, options.wer_policy);
    if (!w) {
      set.skipped.push_back(id + ": reference is empty after normalization");
      continue;
    }
    RawExample ex;
    ex.id = id;
    ex.corpus = bundle.utterance.corpus;
    ex.duration_ms = bundle.utterance.duration_ms();
    ex.wer = *w;
    ex.features = assemble(bundle, options.feature_policy);
    set.examples.push_back(std::move(ex));
  }
  return set;
}

std::vector<Fold> loco_folds(std::span<const std::string> corpus_of_item) {
  std::set<std::string> corpora(corpus_of_item.begin(), corpus_of_item.end());
  if (corpora.size() < 2) {
    throw DataError("leave-one-corpus-out needs at least two corpora, found " + std::to_string(corpora.size()));
  }
  std::vector<Fold> folds;
  for (const auto& test_corpus : corpora) {
    Fold fold;
    fold.test_corpus = test_corpus;
    for (const auto& c : corpora) {
      if (c != test_corpus) fold.train_corpora.push_back(c);
    }
    for (std::size_t i = 0; i < corpus_of_item.size(); ++i) {
      (corpus_of_item[i] == test_corpus ? fold.test : fold.train).push_back(i);
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<Fold> loco_folds(std::span<const RawExample> examples) {
  std::vector<std::string> corpora;
  corpora.reserve(examples.size());
  for (const auto& e : examples) corpora.push_back(e.corpus);
  return loco_folds(corpora);
}

std::vector<Fold> loco_folds(const Dataset& dataset) {
  std::vector<std::string> corpora;
  corpora.reserve(dataset.size());
  for (const auto& [id, b] : dataset.utterances()) corpora.push_back(b.utterance.corpus);
  return loco_folds(corpora);
}

std::optional<double> median(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

std::optional<double> mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

std::optional<double> ratio(double num, double den) {
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

SelectionMetrics evaluate_selection(std::span<const LabeledExample> test, std::span<const WerClass> predictions) {
  if (test.empty()) throw DataError("cannot evaluate an empty test set");
  if (test.size() != predictions.size()) throw DataError("test set and prediction counts differ");

  SelectionMetrics m;
  std::vector<double> wer_all;
  std::vector<double> wer_selected;
  std::int64_t low_ms = 0;
  std::int64_t low_selected_ms = 0;
  std::size_t selected = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& e = test[i];
    const bool is_low = e.label == WerClass::kLow;
    const bool picked = predictions[i] == WerClass::kLow;
    wer_all.push_back(e.wer);
    m.duration_ms += e.duration_ms;
    if (is_low) low_ms += e.duration_ms;
    if (picked) {
      ++selected;
      wer_selected.push_back(e.wer);
      m.selected_duration_ms += e.duration_ms;
      if (is_low) low_selected_ms += e.duration_ms;
    }
    if (picked && is_low) ++m.counts.tp;
    if (picked && !is_low) ++m.counts.fp;
    if (!picked && !is_low) ++m.counts.tn;
    if (!picked && is_low) ++m.counts.fn;
  }
  m.utterances = test.size();
  const auto& c = m.counts;
  m.precision = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  m.recall_count = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  m.recall_duration = ratio(static_cast<double>(low_selected_ms), static_cast<double>(low_ms));
  m.wer_median_selected = median(wer_selected);
  m.wer_mean_selected = mean(wer_selected);
  m.wer_median_all = median(wer_all);
  m.wer_mean_all = mean(wer_all);
  m.pct_duration_selected =
      m.duration_ms > 0 ? 100.0 * static_cast<double>(m.selected_duration_ms) / static_cast<double>(m.duration_ms)
                        : 0.0;
  m.pct_count_selected = 100.0 * static_cast<double>(selected) / static_cast<double>(test.size());
  return m;
}

SelectionMetrics mean_of(std::span<const SelectionMetrics> rows) {
  SelectionMetrics out;
  if (rows.empty()) return out;
  const double n = static_cast<double>(rows.size());
  auto avg = [&](std::optional<double> SelectionMetrics::*member) -> std::optional<double> {
    double s = 0.0;
    for (const auto& r : rows) {
      if (!(r.*member)) return std::nullopt;
      s += *(r.*member);
    }
    return s / n;
  };
  out.precision = avg(&SelectionMetrics::precision);
  out.recall_count = avg(&SelectionMetrics::recall_count);
  out.recall_duration = avg(&SelectionMetrics::recall_duration);
  out.wer_median_selected = avg(&SelectionMetrics::wer_median_selected);
  out.wer_mean_selected = avg(&SelectionMetrics::wer_mean_selected);
  out.wer_median_all = avg(&SelectionMetrics::wer_median_all);
  out.wer_mean_all = avg(&SelectionMetrics::wer_mean_all);
  double pct_d = 0.0;
  double pct_c = 0.0;
  for (const auto& r : rows) {
    pct_d += r.pct_duration_selected;
    pct_c += r.pct_count_selected;
    out.counts.tp += r.counts.tp;
    out.counts.fp += r.counts.fp;
    out.counts.tn += r.counts.tn;
    out.counts.fn += r.counts.fn;
    out.utterances += r.utterances;
    out.duration_ms += r.duration_ms;
    out.selected_duration_ms += r.selected_duration_ms;
  }
  out.pct_duration_selected = pct_d / n;
  out.pct_count_selected = pct_c / n;
  return out;
}

ReliabilityModel train_fold(std::span<const RawExample> examples, const Fold& fold, const TrainOptions& options) {
  std::vector<RawExample> train;
  train.reserve(fold.train.size());
  for (std::size_t i : fold.train) train.push_back(examples[i]);
  try {
    return train_from_raw(train, options);
  } catch (const DataError& e) {
    throw DataError("fold '" + fold.test_corpus + "': " + e.what());
  }
}

namespace {

struct FoldOutcome {
  ReliabilityModel model;
  FoldResult result;
  std::vector<LabeledExample> test;
  std::vector<WerClass> predictions;
};

FoldOutcome run_fold(std::span<const RawExample> examples, const Fold& fold, const TrainOptions& options) {
  FoldOutcome out;
  out.model = train_fold(examples, fold, options);
  std::vector<RawExample> test_raw;
  for (std::size_t i : fold.test) test_raw.push_back(examples[i]);
  out.test = label_examples(test_raw, out.model.standardizer, options.wer_threshold);
  for (const auto& e : test_raw) out.predictions.push_back(predict(out.model, e.features).label);
  out.result.test_corpus = fold.test_corpus;
  out.result.train_corpora = fold.train_corpora;
  out.result.metrics = evaluate_selection(out.test, out.predictions);
  const std::vector<WerClass> keep_all(out.test.size(), WerClass::kLow);
  out.result.baseline = evaluate_selection(out.test, keep_all);
  return out;
}

}  // namespace

CvResult run_cv(std::span<const RawExample> examples, const CvConfig& config) {
  const auto folds = loco_folds(examples);
  std::vector<FoldOutcome> outcomes(folds.size());
  if (config.threads > 1) {
    std::vector<std::future<FoldOutcome>> pending;
    std::size_t next = 0;
    while (next < folds.size() || !pending.empty()) {
      while (next < folds.size() && pending.size() < config.threads) {
        pending.push_back(std::async(std::launch::async, run_fold, examples, std::cref(folds[next]),
                                     std::cref(config.train)));
        ++next;
      }
      // Futures complete in submission order; outcome slots are keyed by fold index.
      const std::size_t index = next - pending.size();
      outcomes[index] = pending.front().get();
      pending.erase(pending.begin());
    }
  } else {
    for (std::size_t f = 0; f < folds.size(); ++f) outcomes[f] = run_fold(examples, folds[f], config.train);
  }

  CvResult cv;
  cv.fp_cost = config.train.fp_cost;
  std::vector<SelectionMetrics> fold_metrics;
  std::vector<SelectionMetrics> fold_baselines;
  std::vector<LabeledExample> pooled_test;
  std::vector<WerClass> pooled_predictions;
  for (auto& o : outcomes) {
    fold_metrics.push_back(o.result.metrics);
    fold_baselines.push_back(o.result.baseline);
    pooled_test.insert(pooled_test.end(), o.test.begin(), o.test.end());
    pooled_predictions.insert(pooled_predictions.end(), o.predictions.begin(), o.predictions.end());
    cv.folds.push_back(std::move(o.result));
    cv.models.push_back(std::move(o.model));
  }
  cv.mean = mean_of(fold_metrics);
  cv.baseline_mean = mean_of(fold_baselines);
  cv.pooled = evaluate_selection(pooled_test, pooled_predictions);
  return cv;
}

SweepResult sweep_fp_cost(std::span<const RawExample> examples, std::span<const double> grid,
                          const CvConfig& config) {
  if (grid.empty()) throw DataError("fp_cost grid is empty");
  SweepResult sweep;
  for (double cost : grid) {
    CvConfig c = config;
    c.train.fp_cost = cost;
    sweep.rows.push_back(run_cv(examples, c));
  }
  sweep.baseline = sweep.rows.front().baseline_mean;
  return sweep;
}

}  // namespace asrsel
