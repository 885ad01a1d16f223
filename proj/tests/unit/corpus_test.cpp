#include "asrsel/corpus.hpp"

#include <gtest/gtest.h>

#include "asrsel/error.hpp"
#include "test_support.hpp"

namespace asrsel {
namespace {

namespace fs = std::filesystem;

UtteranceRecord U(const std::string& id, const std::string& corpus, double start, double end) {
  return {id, corpus, corpus + "_r", start, end, {}, "a b c"};
}

TEST(Dataset, JoinsRecordsByUtteranceId) {
  DatasetBuilder b;
  b.add(U("a", "X", 0, 1));
  b.add(U("b", "Y", 0, 2));
  b.add(HypothesisRecord{"a", Engine::kStrong, {{"a", -0.1, {}, {}}}});
  b.add(HypothesisRecord{"a", Engine::kWeak, {{"b", -0.2, {}, {}}}});
  b.add(AcousticsRecord{"b", 10, 20});
  const auto ds = b.build();
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_TRUE(ds.find("a")->strong);
  EXPECT_TRUE(ds.find("a")->weak);
  EXPECT_FALSE(ds.find("a")->acoustics);
  EXPECT_TRUE(ds.find("b")->acoustics);
  EXPECT_EQ(ds.corpora(), (std::set<std::string>{"X", "Y"}));
  EXPECT_EQ(ds.find("zzz"), nullptr);
  EXPECT_TRUE(ds.warnings().empty());
}

TEST(Dataset, DuplicatesAreRejected) {
  DatasetBuilder b;
  b.add(U("a", "X", 0, 1), "u.jsonl:2");
  try {
    b.add(U("a", "X", 0, 1), "u.jsonl:3");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("u.jsonl:3"), std::string::npos);
  }
  b.add(HypothesisRecord{"a", Engine::kStrong, {}});
  EXPECT_NO_THROW(b.add(HypothesisRecord{"a", Engine::kWeak, {}}));
  EXPECT_THROW(b.add(HypothesisRecord{"a", Engine::kStrong, {}}), DataError);
  b.add(AlignmentRecord{"a", {}});
  EXPECT_THROW(b.add(AlignmentRecord{"a", {}}), DataError);
  b.add(AcousticsRecord{"a", 1, 2});
  EXPECT_THROW(b.add(AcousticsRecord{"a", 1, 2}), DataError);
}

TEST(Dataset, OrphansAreDroppedWithWarnings) {
  DatasetBuilder b;
  b.add(U("a", "X", 0, 1));
  b.add(U("short", "X", 0, 0.1));
  b.add(HypothesisRecord{"ghost", Engine::kStrong, {}});
  b.add(HypothesisRecord{"short", Engine::kStrong, {}});
  b.add(AcousticsRecord{"ghost", 1, 2});
  const auto ds = b.build();
  EXPECT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.dropped_short(), 1u);
  ASSERT_EQ(ds.warnings().size(), 3u);
  EXPECT_NE(ds.warnings()[0].find("unknown"), std::string::npos);
  EXPECT_NE(ds.warnings()[1].find("duration filter"), std::string::npos);
}

TEST(Ingest, DurationFilterKeepsThreeHundredMilliseconds) {
  const auto ds = parse_manifest({testing::fixture("ingest")});
  std::vector<std::string> ids;
  for (const auto& [id, _] : ds.utterances()) ids.push_back(id);
  EXPECT_EQ(ids, (std::vector<std::string>{"u300", "u350"}));
  EXPECT_EQ(ds.dropped_short(), 2u);
  ASSERT_TRUE(ds.find("u350")->weak);
  EXPECT_EQ(ds.corpora(), std::set<std::string>{"LUC"});
}

TEST(Ingest, FilterThresholdIsConfigurable) {
  EXPECT_EQ(parse_manifest({testing::fixture("ingest")}, {0}).size(), 4u);
  EXPECT_EQ(parse_manifest({testing::fixture("ingest")}, {351}).size(), 0u);
}

TEST(Ingest, ArgumentOrderDoesNotMatter) {
  const auto dir = testing::fixture("synth/data");
  const auto a = parse_manifest({dir / "utterances.jsonl", dir / "hypotheses.jsonl", dir / "acoustics.jsonl"});
  const auto b = parse_manifest({dir / "acoustics.jsonl", dir / "hypotheses.jsonl", dir / "utterances.jsonl"});
  EXPECT_EQ(a, b);
}

TEST(Ingest, WriteThenParseIsIdentity) {
  const auto original = parse_manifest({testing::fixture("synth/data")}, {0});
  ASSERT_GT(original.size(), 0u);
  testing::TempDir dir;
  write_dataset(original, dir.path());
  const auto again = parse_manifest({dir.path()}, {0});
  EXPECT_EQ(again, original);
  // And the rewrite is byte-stable.
  testing::TempDir dir2;
  write_dataset(again, dir2.path());
  for (const char* f : {"utterances.jsonl", "hypotheses.jsonl", "alignment.jsonl", "acoustics.jsonl"}) {
    EXPECT_EQ(testing::slurp(dir / f), testing::slurp(dir2 / f)) << f;
  }
}

TEST(Ingest, DirectorySkipsOtherSchemasButExplicitFileDoesNot) {
  testing::TempDir dir;
  testing::spit(dir / "u.jsonl", R"({"schema":"utterances","version":1}
{"id":"a","corpus":"X","recording":"r","start_s":0,"end_s":1}
)");
  testing::spit(dir / "t.jsonl", R"({"schema":"truth","version":1}
)");
  EXPECT_EQ(parse_manifest({dir.path()}).size(), 1u);
  EXPECT_THROW(parse_manifest({dir / "t.jsonl"}), ParseError);
  EXPECT_THROW(parse_manifest({dir / "missing.jsonl"}), Error);
}

TEST(Ingest, BadLineReportsLineNumber) {
  testing::TempDir dir;
  testing::spit(dir / "u.jsonl", R"({"schema":"utterances","version":1}
{"id":"a","corpus":"X","recording":"r","start_s":0,"end_s":1}

{"id":"b","corpus":"X","recording":"r","start_s":0}
)");
  try {
    parse_manifest({dir / "u.jsonl"});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.file(), "u.jsonl");
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.field(), "end_s");
  }
  Diagnostics diag;
  const auto ds = load_with_diagnostics({dir / "u.jsonl"}, {}, diag);
  EXPECT_EQ(ds.size(), 1u);
  ASSERT_EQ(diag.errors.size(), 1u);
  EXPECT_NE(diag.errors[0].find("u.jsonl:4"), std::string::npos);
}

TEST(Stats, PerCorpusAndTotal) {
  const auto ds = parse_manifest({testing::fixture("ingest")}, {0});
  const auto s = dataset_stats(ds);
  ASSERT_EQ(s.per_corpus.size(), 2u);
  EXPECT_EQ(s.per_corpus.at("BER").utterances, 2u);
  EXPECT_EQ(s.per_corpus.at("BER").duration_ms, 250 + 299);
  EXPECT_EQ(s.per_corpus.at("BER").recordings, 1u);
  EXPECT_EQ(s.total.utterances, 4u);
  EXPECT_EQ(s.total.duration_ms, 250 + 299 + 300 + 350);
  EXPECT_EQ(s.total.recordings, 2u);
  EXPECT_DOUBLE_EQ(s.total.minutes(), 0.0);
  CorpusStats c;
  c.duration_ms = 60000 * 72 + 2900;
  EXPECT_DOUBLE_EQ(c.minutes(), 72.0);
}

}  // namespace
}  // namespace asrsel
