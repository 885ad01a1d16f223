#include "asrsel/records.hpp"

#include <gtest/gtest.h>

#include "asrsel/error.hpp"

namespace asrsel {
namespace {

const LineContext kHere{"x.jsonl", 7};

template <typename Fn>
ParseError capture(Fn&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError thrown";
  return ParseError("", 0, "", "");
}

TEST(Records, UtteranceRoundTrip) {
  UtteranceRecord u{"BER_00001", "BER", "BER_rec01", 1.5, 2.25, "FEM", "Hello there."};
  const auto j = to_json(u);
  EXPECT_EQ(dump_line(j),
            R"({"id":"BER_00001","corpus":"BER","recording":"BER_rec01","start_s":1.5,"end_s":2.25,)"
            R"("speaker":"FEM","reference":"Hello there."})");
  EXPECT_EQ(utterance_from_json(parse_json_line(dump_line(j), kHere), kHere), u);
  EXPECT_EQ(u.duration_ms(), 750);
}

TEST(Records, OptionalFieldsMayBeAbsentOrNull) {
  const auto u = utterance_from_json(
      Json::parse(R"({"id":"a","corpus":"c","recording":"r","start_s":0,"end_s":1,"speaker":null})"), kHere);
  EXPECT_FALSE(u.speaker);
  EXPECT_FALSE(u.reference);
  EXPECT_EQ(utterance_from_json(to_json(u), kHere), u);
}

TEST(Records, DurationRoundsToMilliseconds) {
  UtteranceRecord u{"a", "c", "r", 11.0, 11.299, {}, {}};
  EXPECT_EQ(u.duration_ms(), 299);
  u.start_s = 1.0;
  u.end_s = 1.3;
  EXPECT_EQ(u.duration_ms(), 300);
}

TEST(Records, HypothesisRoundTripKeepsWordTimes) {
  HypothesisRecord h{"a", Engine::kWeak, {{"hi", -0.25, 0.1, 0.4}, {"there", -1.5, {}, {}}}};
  const auto back = hypothesis_from_json(parse_json_line(dump_line(to_json(h)), kHere), kHere);
  EXPECT_EQ(back, h);
  EXPECT_EQ(back.transcript(), "hi there");
  EXPECT_EQ(back.logprobs(), (std::vector<double>{-0.25, -1.5}));
}

TEST(Records, AlignmentAndAcousticsRoundTrip) {
  AlignmentRecord a{"a", {{"x", -0.5}}};
  EXPECT_EQ(alignment_from_json(to_json(a), kHere), a);
  AcousticsRecord c{"a", 12.5, -3.25};
  EXPECT_EQ(acoustics_from_json(to_json(c), kHere), c);
}

TEST(Records, EngineNames) {
  EXPECT_EQ(parse_engine("weak"), Engine::kWeak);
  EXPECT_EQ(parse_engine("strong"), Engine::kStrong);
  EXPECT_EQ(parse_engine("Strong"), std::nullopt);
  EXPECT_EQ(to_string(Engine::kWeak), "weak");
}

TEST(Records, ErrorsNameFileLineAndField) {
  auto e = capture([] {
    utterance_from_json(Json::parse(R"({"id":"a","corpus":"c","recording":"r","start_s":"0","end_s":1})"),
                        kHere);
  });
  EXPECT_EQ(e.file(), "x.jsonl");
  EXPECT_EQ(e.line(), 7u);
  EXPECT_EQ(e.field(), "start_s");
  EXPECT_NE(std::string(e.what()).find("x.jsonl:7"), std::string::npos);

  e = capture([] { utterance_from_json(Json::parse(R"({"id":"a","corpus":"c","recording":"r","start_s":2,"end_s":1})"), kHere); });
  EXPECT_EQ(e.field(), "end_s");
  e = capture([] { hypothesis_from_json(Json::parse(R"({"utterance_id":"a","engine":"medium","words":[]})"), kHere); });
  EXPECT_EQ(e.field(), "engine");
  e = capture([] { hypothesis_from_json(Json::parse(R"({"utterance_id":"a","engine":"weak"})"), kHere); });
  EXPECT_EQ(e.field(), "words");
  e = capture([] { acoustics_from_json(Json::parse(R"({"utterance_id":"","snr_db":1,"c50_db":2})"), kHere); });
  EXPECT_EQ(e.field(), "utterance_id");
  e = capture([] { parse_json_line("{not json", kHere); });
  EXPECT_EQ(e.line(), 7u);
}

TEST(Records, HeaderVersionChecks) {
  const auto h = header_from_json(make_header("utterances", Json{{"producer", "x"}}), kHere);
  EXPECT_EQ(h.schema, "utterances");
  EXPECT_EQ(h.version, 1);
  EXPECT_EQ(h.extra.at("producer"), "x");

  auto e = capture([] { header_from_json(Json::parse(R"({"schema":"utterances","version":2})"), kHere); });
  EXPECT_EQ(e.field(), "version");
  EXPECT_NE(e.detail().find("newer"), std::string::npos);
  e = capture([] { header_from_json(Json::parse(R"({"schema":"utterances","version":0})"), kHere); });
  EXPECT_EQ(e.field(), "version");
  e = capture([] { header_from_json(Json::parse(R"({"version":1})"), kHere); });
  EXPECT_EQ(e.field(), "schema");
}

}  // namespace
}  // namespace asrsel
