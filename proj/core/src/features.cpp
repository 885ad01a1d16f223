#include "asrsel/features.hpp"

#include <algorithm>
#include <cmath>

#include "asrsel/align.hpp"
#include "asrsel/error.hpp"

namespace asrsel {

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static constexpr std::array<std::string_view, kFeatureCount> kNames{
      "divergence",   "strong_mean_lp", "strong_min_lp", "strong_max_lp", "weak_mean_lp", "weak_min_lp",
      "weak_max_lp",  "align_mean_lp",  "align_min_lp",  "align_max_lp",  "snr_db",       "c50_db"};
  return kNames;
}

std::array<bool, kFeatureCount> FeatureVector::mask() const {
  std::array<bool, kFeatureCount> m{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) m[i] = values[i].has_value();
  return m;
}

std::optional<ConfidenceStats> confidence_stats(std::span<const double> logprobs) {
  if (logprobs.empty()) return std::nullopt;
  ConfidenceStats s{0.0, logprobs.front(), logprobs.front()};
  double sum = 0.0;
  for (double lp : logprobs) {
    sum += lp;
    s.min = std::min(s.min, lp);
    s.max = std::max(s.max, lp);
  }
  s.mean = sum / static_cast<double>(logprobs.size());
  return s;
}

namespace {

void put_stats(FeatureVector& v, std::size_t first, const std::vector<double>& logprobs) {
  if (auto s = confidence_stats(logprobs)) {
    v.values[first] = s->mean;
    v.values[first + 1] = s->min;
    v.values[first + 2] = s->max;
  }
}

}  // namespace

FeatureVector assemble(const UtteranceBundle& bundle, const NormalizationPolicy& policy) {
  if (!bundle.weak && !bundle.strong) {
    throw DataError("utterance '" + bundle.utterance.id + "' has no hypotheses and cannot be featurized");
  }
  FeatureVector v;
  if (bundle.weak && bundle.strong) {
    const auto weak = normalize(bundle.weak->transcript(), policy);
    const auto strong = normalize(bundle.strong->transcript(), policy);
    v.values[kDivergence] = divergence(weak, strong);
  }
  if (bundle.strong) put_stats(v, kStrongMeanLp, bundle.strong->logprobs());
  if (bundle.weak) put_stats(v, kWeakMeanLp, bundle.weak->logprobs());
  if (bundle.alignment) put_stats(v, kAlignMeanLp, bundle.alignment->logprobs());
  if (bundle.acoustics) {
    v.values[kSnrDb] = bundle.acoustics->snr_db;
    v.values[kC50Db] = bundle.acoustics->c50_db;
  }
  return v;
}

Standardizer fit_standardizer(std::span<const FeatureVector> train) {
  if (train.empty()) throw DataError("cannot fit standardizer on an empty training set");
  Standardizer s;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : train) {
      if (v.values[f]) {
        sum += *v.values[f];
        ++n;
      }
    }
    if (n == 0) {
      throw DataError("feature '" + std::string(feature_names()[f]) + "' is never observed in the training data");
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& v : train) {
      if (v.values[f]) ss += (*v.values[f] - mean) * (*v.values[f] - mean);
    }
    s.mean[f] = mean;
    s.stddev[f] = std::sqrt(ss / static_cast<double>(n));
  }
  return s;
}

StandardizedVector transform(const Standardizer& s, const FeatureVector& v) {
  StandardizedVector z{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const double x = v.values[f].value_or(s.mean[f]);
    z[f] = s.stddev[f] > 0.0 ? (x - s.mean[f]) / s.stddev[f] : 0.0;
  }
  return z;
}

}  // namespace asrsel
