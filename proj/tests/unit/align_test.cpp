#include "asrsel/align.hpp"

#include <gtest/gtest.h>

#include "asrsel/error.hpp"
#include "asrsel/random.hpp"
#include "test_support.hpp"

namespace asrsel {
namespace {

using testing::oracle_edit_distance;
using testing::words;

std::vector<std::string> random_tokens(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> alphabet{"a", "b", "c", "d", "e"};
  std::vector<std::string> out(rng.index(max_len + 1));
  for (auto& t : out) t = alphabet[rng.index(alphabet.size())];
  return out;
}

TEST(EditAlign, IdenticalSequencesAreAllMatches) {
  const auto r = words("the cat sat");
  const auto s = edit_align(r, r);
  EXPECT_EQ(s.distance(), 0u);
  EXPECT_EQ(s.matches, 3u);
}

TEST(EditAlign, EmptySides) {
  const std::vector<std::string> none;
  const auto r = words("a b c");
  EXPECT_EQ(edit_align(r, none), (EditSummary{0, 3, 0, 0}));
  EXPECT_EQ(edit_align(none, r), (EditSummary{0, 0, 3, 0}));
  EXPECT_EQ(edit_align(none, none).distance(), 0u);
}

TEST(EditAlign, CountsEachOperation) {
  EXPECT_EQ(edit_align(words("a b c"), words("a x c")), (EditSummary{1, 0, 0, 2}));
  EXPECT_EQ(edit_align(words("a b c"), words("a c")), (EditSummary{0, 1, 0, 2}));
  EXPECT_EQ(edit_align(words("a b c"), words("a b x c")), (EditSummary{0, 0, 1, 3}));
}

TEST(EditAlign, TiesPreferSubstitutionOverDeleteInsert) {
  // "a b" vs "b c": distance 2 as two substitutions or delete+insert.
  const auto s = edit_align(words("a b"), words("b c"));
  EXPECT_EQ(s.distance(), 2u);
  EXPECT_EQ(s.substitutions + s.deletions + s.insertions, 2u);
}

TEST(EditAlign, DistanceIsSymmetricWithSwappedRoles) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_tokens(rng, 7);
    const auto b = random_tokens(rng, 7);
    const auto ab = edit_align(a, b);
    const auto ba = edit_align(b, a);
    ASSERT_EQ(ab.distance(), ba.distance());
    // The S/D/I split depends on tie-breaking; the net length change does not.
    EXPECT_EQ(static_cast<long>(ab.deletions) - static_cast<long>(ab.insertions),
              static_cast<long>(ba.insertions) - static_cast<long>(ba.deletions));
  }
}

TEST(EditAlign, SummaryAccountsForBothSequences) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_tokens(rng, 8);
    const auto b = random_tokens(rng, 8);
    const auto s = edit_align(a, b);
    EXPECT_EQ(s.matches + s.substitutions + s.deletions, a.size());
    EXPECT_EQ(s.matches + s.substitutions + s.insertions, b.size());
  }
}

TEST(EditAlign, MatchesRecursiveOracleOnRandomPairs) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_tokens(rng, 8);
    const auto b = random_tokens(rng, 8);
    ASSERT_EQ(edit_align(a, b).distance(), oracle_edit_distance(a, b));
  }
}

TEST(EditAlign, TriangleInequality) {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_tokens(rng, 6);
    const auto b = random_tokens(rng, 6);
    const auto c = random_tokens(rng, 6);
    EXPECT_LE(edit_align(a, c).distance(), edit_align(a, b).distance() + edit_align(b, c).distance());
  }
}

TEST(EditAlign, DistanceBounds) {
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_tokens(rng, 8);
    const auto b = random_tokens(rng, 8);
    const auto d = edit_align(a, b).distance();
    EXPECT_GE(d, a.size() > b.size() ? a.size() - b.size() : b.size() - a.size());
    EXPECT_LE(d, std::max(a.size(), b.size()));
  }
}

TEST(Wer, OneWordUtteranceFullyWrong) { EXPECT_EQ(wer(words("ball"), words("doll")), 1.0); }

TEST(Wer, OneSubstitutionInTenWords) {
  EXPECT_EQ(wer(words("a b c d e f g h i j"), words("a b c d e f g h i x")), 0.1);
}

TEST(Wer, CanExceedOne) { EXPECT_EQ(wer(words("hi"), words("oh hi there you")), 3.0); }

TEST(Wer, EmptyReferenceIsUndefined) {
  EXPECT_THROW(wer(std::vector<std::string>{}, words("a")), Error);
}

TEST(Divergence, StrongHypothesisIsTheReference) {
  EXPECT_EQ(divergence(words("a b"), words("a b c d")), 0.5);
  EXPECT_EQ(divergence(words("a b c d"), words("a b")), 1.0);
}

TEST(Divergence, IdenticalOrEmpty) {
  EXPECT_EQ(divergence(words("x y"), words("x y")), 0.0);
  EXPECT_EQ(divergence(std::vector<std::string>{}, std::vector<std::string>{}), 0.0);
  EXPECT_EQ(divergence(words("x y"), std::vector<std::string>{}), 2.0);
}

}  // namespace
}  // namespace asrsel
