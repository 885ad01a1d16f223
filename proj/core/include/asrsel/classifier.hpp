#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "asrsel/features.hpp"

namespace asrsel {

/// LOW is the positive ("acceptable", selected) class, so a false positive is
/// a high-WER transcript that gets through.
enum class WerClass : int { kLow = 1, kHigh = -1 };

std::string_view to_string(WerClass label);

inline constexpr double kDefaultWerThreshold = 0.30;

/// LOW iff wer <= threshold (the boundary value itself is LOW).
WerClass make_label(double wer, double threshold = kDefaultWerThreshold);

// ---------------------------------------------------------------------------
// Generic cost-weighted linear SVM.

struct SvmOptions {
  /// Regularization constant C.
  double regularization = 1.0;
  std::uint64_t seed = 0;
  /// Stop once the largest projected-gradient violation in an epoch is below this.
  double tolerance = 1e-6;
  int max_epochs = 10000;
};

struct LinearSvm {
  std::vector<double> weights;
  double bias = 0.0;
  int epochs = 0;
  bool converged = false;
  double max_violation = 0.0;

  double decision(std::span<const double> x) const;
};

/// Solves
///   min_w,b  ½(‖w‖² + b²) + C Σ_i cost_i · max(0, 1 − y_i (w·x_i + b))
/// by dual coordinate descent. The bias is an extra weight on a constant
/// input of 1 and is therefore regularized like the other weights. Examples
/// are visited in a fresh seeded permutation each epoch; results are
/// bit-identical for equal inputs and seed.
///
/// `labels` are ±1. Throws DataError when only one class is present, when the
/// sizes disagree, or when a cost is not positive.
LinearSvm train_linear_svm(std::span<const std::vector<double>> x, std::span<const int> labels,
                           std::span<const double> costs, const SvmOptions& options);

// ---------------------------------------------------------------------------
// Utterance reliability model.

/// One utterance ready for training or evaluation, before standardization.
struct RawExample {
  std::string id;
  std::string corpus;
  std::int64_t duration_ms = 0;
  double wer = 0.0;
  FeatureVector features;
};

struct LabeledExample {
  StandardizedVector features{};
  WerClass label = WerClass::kHigh;
  double wer = 0.0;
  std::int64_t duration_ms = 0;
  std::string corpus;
};

struct TrainOptions {
  double fp_cost = 1.0;
  double fn_cost = 1.0;
  double regularization = 1.0;
  double wer_threshold = kDefaultWerThreshold;
  std::uint64_t seed = 0;
  double tolerance = 1e-6;
  int max_epochs = 10000;
};

struct ReliabilityModel {
  static constexpr int kFormatMajor = 1;
  static constexpr int kFormatMinor = 0;

  std::vector<std::string> feature_names;
  Standardizer standardizer;
  std::array<double, kFeatureCount> weights{};
  double bias = 0.0;
  double fp_cost = 1.0;
  double fn_cost = 1.0;
  double regularization = 1.0;
  double wer_threshold = kDefaultWerThreshold;
  std::uint64_t seed = 0;
  std::string training_checksum;
  int epochs = 0;
  bool converged = false;

  double decision(const StandardizedVector& z) const;

  bool operator==(const ReliabilityModel&) const = default;
};

/// Labels and standardizes raw examples with an already fitted standardizer.
std::vector<LabeledExample> label_examples(std::span<const RawExample> raw, const Standardizer& standardizer,
                                           double wer_threshold);

/// Trains on standardized examples. HIGH examples carry fp_cost (their slack
/// is what lets a bad transcript through), LOW examples carry fn_cost.
ReliabilityModel train(std::span<const LabeledExample> examples, const Standardizer& standardizer,
                       const TrainOptions& options);

/// Fits the standardizer on `raw`, labels, and trains.
ReliabilityModel train_from_raw(std::span<const RawExample> raw, const TrainOptions& options);

struct Prediction {
  WerClass label = WerClass::kHigh;
  double decision = 0.0;
};

Prediction predict(const ReliabilityModel& model, const FeatureVector& raw);

/// SHA-256 over a canonical encoding of the training examples.
std::string training_checksum(std::span<const LabeledExample> examples);

Json model_to_json(const ReliabilityModel& model);
/// Throws Error on missing fields, wrong feature count, or a newer major format.
ReliabilityModel model_from_json(const Json& j);

std::string serialize_model(const ReliabilityModel& model);
ReliabilityModel parse_model(std::string_view text, std::string_view origin = "<model>");

void save_model(const ReliabilityModel& model, const std::filesystem::path& path);
ReliabilityModel load_model(const std::filesystem::path& path);

}  // namespace asrsel
