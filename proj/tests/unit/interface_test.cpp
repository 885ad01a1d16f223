// Contract checks for record files produced by the external engine runner.
// The sample set under fixtures/runner_sample is what the shipped stub
// engines emit for a three-utterance manifest with one missing recording.

#include <gtest/gtest.h>

#include <sstream>

#include "asrsel/corpus.hpp"
#include "asrsel/error.hpp"
#include "asrsel/eval.hpp"
#include "asrsel/features.hpp"
#include "cli/commands.hpp"
#include "test_support.hpp"

namespace asrsel {
namespace {

namespace fs = std::filesystem;

fs::path sample() { return testing::fixture("runner_sample"); }

TEST(RunnerRecords, SampleSetPassesValidate) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::run({"validate", sample().string()}, out, err), 0) << out.str() << err.str();
  EXPECT_NE(out.str().find("skip_log: 1 file(s)"), std::string::npos) << out.str();
}

TEST(RunnerRecords, HeaderExtrasArePreserved) {
  const std::string text = testing::slurp(sample() / "hypotheses.jsonl");
  const auto lines = io::split_lines(text);
  const auto h = header_from_json(Json::parse(std::string(lines[0])), {"hypotheses.jsonl", 1});
  EXPECT_EQ(h.schema, "hypotheses");
  EXPECT_TRUE(h.extra.contains("logprob_convention"));
  EXPECT_EQ(h.extra["engines"]["strong"], "stub-echo-strong");
}

TEST(RunnerRecords, RecordsPlusSkipsCoverTheManifestPerStage) {
  const auto ds = parse_manifest({sample()});
  const auto skips = load_skip_log(sample() / "skip_log.jsonl");
  std::map<std::string, std::size_t> produced{{"weak_asr", 0}, {"strong_asr", 0}, {"aligner", 0}, {"acoustics", 0}};
  for (const auto& [id, b] : ds.utterances()) {
    produced["weak_asr"] += b.weak.has_value();
    produced["strong_asr"] += b.strong.has_value();
    produced["aligner"] += b.alignment.has_value();
    produced["acoustics"] += b.acoustics.has_value();
  }
  for (const auto& s : skips) {
    ASSERT_TRUE(produced.contains(s.stage)) << s.stage;
    ++produced[s.stage];
    const auto* b = ds.find(s.utterance_id);
    ASSERT_NE(b, nullptr);
    // A skipped stage never leaves a record behind.
    if (s.stage == "strong_asr") {
      EXPECT_FALSE(b->strong);
    }
    if (s.stage == "acoustics") {
      EXPECT_FALSE(b->acoustics);
    }
  }
  for (const auto& [stage, n] : produced) EXPECT_EQ(n, ds.size()) << stage;
}

TEST(RunnerRecords, WordTimesLieInsideTheClip) {
  const auto ds = parse_manifest({sample()});
  for (const auto& [id, b] : ds.utterances()) {
    const double length = b.utterance.end_s - b.utterance.start_s;
    for (const auto* h : {&b.weak, &b.strong}) {
      if (!*h) continue;
      for (const auto& w : (*h)->words) {
        EXPECT_EQ(w.start_s.has_value(), w.end_s.has_value()) << id;
        if (!w.start_s) continue;
        EXPECT_LE(0.0, *w.start_s);
        EXPECT_LT(*w.start_s, *w.end_s);
        EXPECT_LE(*w.end_s, length);
      }
    }
  }
}

TEST(RunnerRecords, SkippedUtteranceIsNotScored) {
  const auto set = build_examples(parse_manifest({sample()}));
  ASSERT_EQ(set.examples.size(), 2u);
  ASSERT_EQ(set.skipped.size(), 1u);
  EXPECT_EQ(set.skipped[0], "S_00003: no strong hypothesis");
  EXPECT_EQ(set.examples[0].wer, 0.0);
  EXPECT_DOUBLE_EQ(*set.examples[0].features.values[kDivergence], 0.25);
  EXPECT_DOUBLE_EQ(*set.examples[1].features.values[kDivergence], 1.0 / 3.0);
}

TEST(RunnerRecords, SkipLogErrors) {
  testing::TempDir dir;
  testing::spit(dir / "s.jsonl", "{\"schema\":\"skip_log\",\"version\":1}\n{\"utterance_id\":\"a\",\"reason\":\"x\"}\n");
  try {
    load_skip_log(dir / "s.jsonl");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.field(), "stage");
  }
  const SkipRecord r{"a", "clip", "zero-length request"};
  EXPECT_EQ(skip_from_json(to_json(r), {}), r);
}

}  // namespace
}  // namespace asrsel
