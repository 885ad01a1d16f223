#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "asrsel/corpus.hpp"
#include "asrsel/records.hpp"
#include "asrsel/text_normalize.hpp"

namespace asrsel {

inline constexpr std::size_t kFeatureCount = 12;

/// Index of each feature inside a FeatureVector, in file and model order.
enum FeatureIndex : std::size_t {
  kDivergence = 0,
  kStrongMeanLp,
  kStrongMinLp,
  kStrongMaxLp,
  kWeakMeanLp,
  kWeakMinLp,
  kWeakMaxLp,
  kAlignMeanLp,
  kAlignMinLp,
  kAlignMaxLp,
  kSnrDb,
  kC50Db,
};

const std::array<std::string_view, kFeatureCount>& feature_names();

/// Per-utterance features. An empty optional marks a value that could not be
/// observed (engine produced no words, acoustics missing, ...).
struct FeatureVector {
  std::array<std::optional<double>, kFeatureCount> values{};

  bool present(std::size_t i) const { return values[i].has_value(); }
  std::array<bool, kFeatureCount> mask() const;

  bool operator==(const FeatureVector&) const = default;
};

struct ConfidenceStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Mean, minimum and maximum of word log-probabilities; nullopt for an empty
/// list.
std::optional<ConfidenceStats> confidence_stats(std::span<const double> logprobs);

/// Builds the feature vector for one utterance. Hypothesis texts are
/// normalized with `policy` before computing the divergence.
/// Throws DataError when the bundle has no hypothesis at all.
FeatureVector assemble(const UtteranceBundle& bundle, const NormalizationPolicy& policy = {});

using StandardizedVector = std::array<double, kFeatureCount>;

/// Z-score statistics fitted on a training fold. Missing entries are imputed
/// with the training mean, which standardizes to zero.
struct Standardizer {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> stddev{};  // population convention

  const std::array<double, kFeatureCount>& imputation() const { return mean; }

  bool operator==(const Standardizer&) const = default;
};

/// Fits over the observed entries of each feature. Throws DataError naming the
/// feature when some feature is never observed, or when `train` is empty.
Standardizer fit_standardizer(std::span<const FeatureVector> train);

/// Imputes, then maps x -> (x - mean) / std; a zero std maps to 0.
StandardizedVector transform(const Standardizer& standardizer, const FeatureVector& v);

}  // namespace asrsel
