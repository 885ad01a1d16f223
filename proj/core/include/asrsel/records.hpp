#pragma once

// Record types shared by every stage of the pipeline, plus their line-level
// JSON encoding. Each record file is JSON Lines: a header object naming the
// schema and its version, then one record per line.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace asrsel {

using Json = nlohmann::ordered_json;

namespace schema {
inline constexpr std::string_view kUtterances = "utterances";
inline constexpr std::string_view kHypotheses = "hypotheses";
inline constexpr std::string_view kAlignment = "alignment";
inline constexpr std::string_view kAcoustics = "acoustics";
inline constexpr std::string_view kFeatures = "features";
inline constexpr std::string_view kTagged = "tagged";
inline constexpr std::string_view kSelected = "selected";
inline constexpr std::string_view kTruth = "truth";
inline constexpr std::string_view kSkipLog = "skip_log";
inline constexpr int kVersion = 1;
}  // namespace schema

enum class Engine { kWeak, kStrong };

std::string_view to_string(Engine engine);
std::optional<Engine> parse_engine(std::string_view text);

struct UtteranceRecord {
  std::string id;
  std::string corpus;
  std::string recording;
  double start_s = 0.0;
  double end_s = 0.0;
  std::optional<std::string> speaker;
  std::optional<std::string> reference;

  /// round(1000 * (end - start)); integer so the duration filter is exact.
  std::int64_t duration_ms() const;

  bool operator==(const UtteranceRecord&) const = default;
};

struct HypothesisWord {
  std::string text;
  double logprob = 0.0;
  std::optional<double> start_s;
  std::optional<double> end_s;

  bool operator==(const HypothesisWord&) const = default;
};

struct HypothesisRecord {
  std::string utterance_id;
  Engine engine = Engine::kStrong;
  std::vector<HypothesisWord> words;

  /// Word texts joined by single spaces.
  std::string transcript() const;
  std::vector<double> logprobs() const;

  bool operator==(const HypothesisRecord&) const = default;
};

struct AlignedWord {
  std::string text;
  double logprob = 0.0;

  bool operator==(const AlignedWord&) const = default;
};

struct AlignmentRecord {
  std::string utterance_id;
  std::vector<AlignedWord> words;

  std::vector<double> logprobs() const;

  bool operator==(const AlignmentRecord&) const = default;
};

struct AcousticsRecord {
  std::string utterance_id;
  double snr_db = 0.0;
  double c50_db = 0.0;

  bool operator==(const AcousticsRecord&) const = default;
};

/// An utterance an upstream engine could not process. Written instead of a
/// record, never alongside one.
struct SkipRecord {
  std::string utterance_id;
  std::string stage;  // e.g. "strong_asr", "aligner", "clip"
  std::string reason;

  bool operator==(const SkipRecord&) const = default;
};

/// Header line of a record file.
struct FileHeader {
  std::string schema;
  int version = schema::kVersion;
  Json extra = Json::object();
};

Json make_header(std::string_view schema_name,
                Json extra = Json::object());

// Encoders. Keys are emitted in declaration order.
Json to_json(const UtteranceRecord& record);
Json to_json(const HypothesisRecord& record);
Json to_json(const AlignmentRecord& record);
Json to_json(const AcousticsRecord& record);
Json to_json(const SkipRecord& record);

// Decoders. `file` and `line` are only used to build ParseError messages.
struct LineContext {
  std::string_view file;
  std::size_t line = 0;
};

FileHeader header_from_json(const Json& j, const LineContext& where);
UtteranceRecord utterance_from_json(const Json& j, const LineContext& where);
HypothesisRecord hypothesis_from_json(const Json& j, const LineContext& where);
AlignmentRecord alignment_from_json(const Json& j, const LineContext& where);
AcousticsRecord acoustics_from_json(const Json& j, const LineContext& where);
SkipRecord skip_from_json(const Json& j, const LineContext& where);

/// Parses one line of a record file into JSON, mapping syntax errors to
/// ParseError.
Json parse_json_line(std::string_view text, const LineContext& where);

/// Serializes one record as a single line (no trailing newline).
std::string dump_line(const Json& j);

}  // namespace asrsel
