#include "asrsel/records.hpp"

#include <cmath>

#include "asrsel/error.hpp"

namespace asrsel {

std::string_view to_string(Engine engine) {
  return engine == Engine::kWeak ? "weak" : "strong";
}

std::optional<Engine> parse_engine(std::string_view text) {
  if (text == "weak") return Engine::kWeak;
  if (text == "strong") return Engine::kStrong;
  return std::nullopt;
}

std::int64_t UtteranceRecord::duration_ms() const {
  return std::llround(1000.0 * (end_s - start_s));
}

std::string HypothesisRecord::transcript() const {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w.text;
  }
  return out;
}

std::vector<double> HypothesisRecord::logprobs() const {
  std::vector<double> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w.logprob);
  return out;
}

std::vector<double> AlignmentRecord::logprobs() const {
  std::vector<double> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w.logprob);
  return out;
}

namespace {

[[noreturn]] void fail(const LineContext& where, std::string_view field, const std::string& message) {
  throw ParseError(std::string(where.file), where.line, std::string(field), message);
}

const Json& require(const Json& j, std::string_view key, const LineContext& where) {
  if (!j.is_object()) fail(where, "", "record is not a JSON object");
  auto it = j.find(std::string(key));
  if (it == j.end()) fail(where, key, "missing required field");
  return *it;
}

std::string require_string(const Json& j, std::string_view key, const LineContext& where,
                           bool allow_empty = false) {
  const Json& v = require(j, key, where);
  if (!v.is_string()) fail(where, key, "expected a string");
  auto s = v.get<std::string>();
  if (s.empty() && !allow_empty) fail(where, key, "must not be empty");
  return s;
}

double require_number(const Json& j, std::string_view key, const LineContext& where) {
  const Json& v = require(j, key, where);
  if (!v.is_number()) fail(where, key, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, key, "must be finite");
  return d;
}

std::optional<std::string> optional_string(const Json& j, std::string_view key,
                                           const LineContext& where) {
  auto it = j.find(std::string(key));
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(where, key, "expected a string or null");
  return it->get<std::string>();
}

std::optional<double> optional_number(const Json& j, std::string_view key, const LineContext& where) {
  auto it = j.find(std::string(key));
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) fail(where, key, "expected a number or null");
  double d = it->get<double>();
  if (!std::isfinite(d)) fail(where, key, "must be finite");
  return d;
}

const Json& require_array(const Json& j, std::string_view key, const LineContext& where) {
  const Json& v = require(j, key, where);
  if (!v.is_array()) fail(where, key, "expected an array");
  return v;
}

}  // namespace

Json make_header(std::string_view schema_name, Json extra) {
  Json h = Json::object();
  h["schema"] = schema_name;
  h["version"] = schema::kVersion;
  for (auto& [k, v] : extra.items()) h[k] = v;
  return h;
}

Json to_json(const UtteranceRecord& r) {
  Json j = Json::object();
  j["id"] = r.id;
  j["corpus"] = r.corpus;
  j["recording"] = r.recording;
  j["start_s"] = r.start_s;
  j["end_s"] = r.end_s;
  if (r.speaker) j["speaker"] = *r.speaker;
  if (r.reference) j["reference"] = *r.reference;
  return j;
}

Json to_json(const HypothesisRecord& r) {
  Json words = Json::array();
  for (const auto& w : r.words) {
    Json jw = Json::object();
    jw["text"] = w.text;
    jw["logprob"] = w.logprob;
    if (w.start_s) jw["start_s"] = *w.start_s;
    if (w.end_s) jw["end_s"] = *w.end_s;
    words.push_back(std::move(jw));
  }
  Json j = Json::object();
  j["utterance_id"] = r.utterance_id;
  j["engine"] = to_string(r.engine);
  j["words"] = std::move(words);
  return j;
}

Json to_json(const AlignmentRecord& r) {
  Json words = Json::array();
  for (const auto& w : r.words) {
    Json jw = Json::object();
    jw["text"] = w.text;
    jw["logprob"] = w.logprob;
    words.push_back(std::move(jw));
  }
  Json j = Json::object();
  j["utterance_id"] = r.utterance_id;
  j["words"] = std::move(words);
  return j;
}

Json to_json(const AcousticsRecord& r) {
  Json j = Json::object();
  j["utterance_id"] = r.utterance_id;
  j["snr_db"] = r.snr_db;
  j["c50_db"] = r.c50_db;
  return j;
}

Json to_json(const SkipRecord& r) {
  Json j = Json::object();
  j["utterance_id"] = r.utterance_id;
  j["stage"] = r.stage;
  j["reason"] = r.reason;
  return j;
}

FileHeader header_from_json(const Json& j, const LineContext& where) {
  FileHeader h;
  h.schema = require_string(j, "schema", where);
  const Json& v = require(j, "version", where);
  if (!v.is_number_integer()) fail(where, "version", "expected an integer");
  h.version = v.get<int>();
  if (h.version < 1) fail(where, "version", "must be >= 1");
  if (h.version > schema::kVersion) {
    fail(where, "version",
         "schema version " + std::to_string(h.version) + " is newer than supported version " +
             std::to_string(schema::kVersion));
  }
  for (auto& [k, val] : j.items()) {
    if (k != "schema" && k != "version") h.extra[k] = val;
  }
  return h;
}

UtteranceRecord utterance_from_json(const Json& j, const LineContext& where) {
  UtteranceRecord r;
  r.id = require_string(j, "id", where);
  r.corpus = require_string(j, "corpus", where);
  r.recording = require_string(j, "recording", where);
  r.start_s = require_number(j, "start_s", where);
  r.end_s = require_number(j, "end_s", where);
  if (r.start_s < 0.0) fail(where, "start_s", "must be >= 0");
  if (!(r.end_s > r.start_s)) fail(where, "end_s", "must be greater than start_s");
  r.speaker = optional_string(j, "speaker", where);
  r.reference = optional_string(j, "reference", where);
  return r;
}

HypothesisRecord hypothesis_from_json(const Json& j, const LineContext& where) {
  HypothesisRecord r;
  r.utterance_id = require_string(j, "utterance_id", where);
  auto engine = parse_engine(require_string(j, "engine", where));
  if (!engine) fail(where, "engine", "expected \"weak\" or \"strong\"");
  r.engine = *engine;
  for (const auto& jw : require_array(j, "words", where)) {
    if (!jw.is_object()) fail(where, "words", "each word must be an object");
    HypothesisWord w;
    w.text = require_string(jw, "text", where);
    w.logprob = require_number(jw, "logprob", where);
    w.start_s = optional_number(jw, "start_s", where);
    w.end_s = optional_number(jw, "end_s", where);
    r.words.push_back(std::move(w));
  }
  return r;
}

AlignmentRecord alignment_from_json(const Json& j, const LineContext& where) {
  AlignmentRecord r;
  r.utterance_id = require_string(j, "utterance_id", where);
  for (const auto& jw : require_array(j, "words", where)) {
    if (!jw.is_object()) fail(where, "words", "each word must be an object");
    AlignedWord w;
    w.text = require_string(jw, "text", where);
    w.logprob = require_number(jw, "logprob", where);
    r.words.push_back(std::move(w));
  }
  return r;
}

AcousticsRecord acoustics_from_json(const Json& j, const LineContext& where) {
  AcousticsRecord r;
  r.utterance_id = require_string(j, "utterance_id", where);
  r.snr_db = require_number(j, "snr_db", where);
  r.c50_db = require_number(j, "c50_db", where);
  return r;
}

SkipRecord skip_from_json(const Json& j, const LineContext& where) {
  SkipRecord r;
  r.utterance_id = require_string(j, "utterance_id", where);
  r.stage = require_string(j, "stage", where);
  r.reason = require_string(j, "reason", where, true);
  return r;
}

Json parse_json_line(std::string_view text, const LineContext& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(where, "", std::string("malformed JSON: ") + e.what());
  }
}

std::string dump_line(const Json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace asrsel
