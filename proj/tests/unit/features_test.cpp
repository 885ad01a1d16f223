#include "asrsel/features.hpp"

#include <gtest/gtest.h>

#include "asrsel/error.hpp"
#include "asrsel/random.hpp"
#include "test_support.hpp"

namespace asrsel {
namespace {

UtteranceBundle bundle_with(std::optional<HypothesisRecord> weak, std::optional<HypothesisRecord> strong) {
  UtteranceBundle b;
  b.utterance = {"u", "X", "r", 0, 1, {}, "ref"};
  b.weak = std::move(weak);
  b.strong = std::move(strong);
  return b;
}

TEST(Features, NamesAreFixed) {
  EXPECT_EQ(feature_names().size(), 12u);
  EXPECT_EQ(feature_names()[kDivergence], "divergence");
  EXPECT_EQ(feature_names()[kC50Db], "c50_db");
}

TEST(Features, ConfidenceStats) {
  EXPECT_FALSE(confidence_stats({}));
  const std::vector<double> lp{-1.0, -3.0, -2.0};
  const auto s = confidence_stats(lp);
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->mean, -2.0);
  EXPECT_DOUBLE_EQ(s->min, -3.0);
  EXPECT_DOUBLE_EQ(s->max, -1.0);
}

// First utterance of the committed synthetic fixture, values copied from the
// record files and reduced by hand.
TEST(Features, FixtureUtteranceMatchesHandComputation) {
  const auto ds = parse_manifest({testing::fixture("synth/data")}, {0});
  const auto* b = ds.find("BER_00001");
  ASSERT_NE(b, nullptr);
  const auto v = assemble(*b);
  const std::array<double, kFeatureCount> expected{
      1.0 / 5.0,
      (0.0 + 0.0 - 0.4866 + 0.0 - 0.1424) / 5.0, -0.4866, 0.0,
      (-2.5491 - 4.4552 - 2.4718 - 3.9733 - 3.2166) / 5.0, -4.4552, -2.4718,
      (-5.4021 - 7.5175 - 4.2792 - 6.7306 - 6.3334) / 5.0, -7.5175, -4.2792,
      19.65, 11.22};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    ASSERT_TRUE(v.values[i]) << feature_names()[i];
    EXPECT_NEAR(*v.values[i], expected[i], 1e-12) << feature_names()[i];
  }
}

TEST(Features, MissingRecordsLeaveGaps) {
  auto b = bundle_with(std::nullopt, HypothesisRecord{"u", Engine::kStrong, {{"a", -1.0, {}, {}}}});
  auto v = assemble(b);
  EXPECT_FALSE(v.present(kDivergence));
  EXPECT_TRUE(v.present(kStrongMeanLp));
  EXPECT_FALSE(v.present(kWeakMinLp));
  EXPECT_FALSE(v.present(kAlignMaxLp));
  EXPECT_FALSE(v.present(kSnrDb));
  const auto m = v.mask();
  EXPECT_EQ(std::count(m.begin(), m.end(), true), 3);

  b.strong->words.clear();
  v = assemble(b);
  EXPECT_FALSE(v.present(kStrongMeanLp));

  EXPECT_THROW(assemble(bundle_with(std::nullopt, std::nullopt)), DataError);
}

TEST(Features, DivergenceUsesNormalizedText) {
  auto b = bundle_with(HypothesisRecord{"u", Engine::kWeak, {{"Hello,", -1, {}, {}}, {"World", -1, {}, {}}}},
                       HypothesisRecord{"u", Engine::kStrong, {{"hello", -1, {}, {}}, {"world.", -1, {}, {}}}});
  EXPECT_EQ(assemble(b).values[kDivergence], 0.0);
  NormalizationPolicy raw{false, false, false, false, false};
  EXPECT_EQ(assemble(b, raw).values[kDivergence], 1.0);
}

TEST(Features, IdenticalEnginesGiveZeroDivergence) {
  const auto ds = parse_manifest({testing::fixture("synth/data")}, {0});
  for (const auto& [id, b] : ds.utterances()) {
    auto copy = b;
    copy.weak = copy.strong;
    copy.weak->engine = Engine::kWeak;
    EXPECT_EQ(assemble(copy).values[kDivergence], 0.0) << id;
  }
}

TEST(Standardizer, FitsObservedEntriesOnly) {
  std::vector<FeatureVector> train(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) train[i].values[f] = static_cast<double>(f);
  }
  train[0].values[0] = 1.0;
  train[1].values[0] = 3.0;
  train[2].values[0] = std::nullopt;
  const auto s = fit_standardizer(train);
  EXPECT_DOUBLE_EQ(s.mean[0], 2.0);
  EXPECT_DOUBLE_EQ(s.stddev[0], 1.0);
  EXPECT_DOUBLE_EQ(s.mean[5], 5.0);
  EXPECT_DOUBLE_EQ(s.stddev[5], 0.0);

  const auto z = transform(s, train[2]);
  EXPECT_EQ(z[0], 0.0);  // imputed with the mean
  EXPECT_EQ(z[5], 0.0);  // zero spread
  EXPECT_DOUBLE_EQ(transform(s, train[1])[0], 1.0);
  EXPECT_EQ(s.imputation()[0], 2.0);
}

TEST(Standardizer, RejectsUnobservedFeatureAndEmptyTrain) {
  EXPECT_THROW(fit_standardizer(std::vector<FeatureVector>{}), DataError);
  std::vector<FeatureVector> train(2);
  for (auto& v : train) {
    for (std::size_t f = 0; f + 1 < kFeatureCount; ++f) v.values[f] = 1.0;
  }
  try {
    fit_standardizer(train);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("c50_db"), std::string::npos);
  }
}

TEST(Standardizer, TrainingColumnsHaveZeroMeanUnitVariance) {
  Rng rng(5);
  std::vector<FeatureVector> train(200);
  for (auto& v : train) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) v.values[f] = rng.uniform(-10.0, 10.0) * (f + 1);
  }
  const auto s = fit_standardizer(train);
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double sum = 0, sq = 0;
    for (const auto& v : train) {
      const double z = transform(s, v)[f];
      sum += z;
      sq += z * z;
    }
    EXPECT_NEAR(sum / 200.0, 0.0, 1e-12);
    EXPECT_NEAR(sq / 200.0, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace asrsel
