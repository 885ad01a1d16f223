#include "asrsel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "asrsel/classifier.hpp"
#include "asrsel/error.hpp"
#include "asrsel/io.hpp"
#include "asrsel/random.hpp"
#include "asrsel/tagger.hpp"
#include "asrsel/text_normalize.hpp"

namespace asrsel {

namespace {

constexpr std::string_view kConfigSchema = "synth_config";
constexpr std::size_t kErrorVocabularySize = 96;

[[noreturn]] void invalid(const std::string& message) { throw Error("invalid synth config: " + message); }

}  // namespace

std::string synth_corpus_name(std::size_t index) {
  static constexpr std::string_view kNames[] = {"BER", "LUC", "SOD", "WAR", "ROS", "MCD", "CAS", "QUE"};
  if (index < std::size(kNames)) return std::string(kNames[index]);
  char buf[16];
  std::snprintf(buf, sizeof buf, "C%02zu", index + 1);
  return buf;
}

void validate(const SynthConfig& c) {
  if (c.corpora < 1) invalid("corpora must be at least 1");
  if (c.utterances_per_corpus < 1) invalid("utterances_per_corpus must be at least 1");
  if (c.recordings_per_corpus < 1) invalid("recordings_per_corpus must be at least 1");
  if (c.vocabulary_size < 10) invalid("vocabulary_size must be at least 10");
  if (!(c.low_wer_fraction >= 0.0 && c.low_wer_fraction <= 1.0)) invalid("low_wer_fraction must be in [0, 1]");
  if (!(c.feature_noise >= 0.0) || !std::isfinite(c.feature_noise)) invalid("feature_noise must be >= 0");
  if (c.min_duration_ms < 1) invalid("duration_range_ms minimum must be positive");
  if (c.max_duration_ms < c.min_duration_ms) invalid("duration_range_ms maximum is below the minimum");
  if (!(c.zipf_exponent > 0.0) || !std::isfinite(c.zipf_exponent)) invalid("zipf_exponent must be > 0");
}

SynthConfig synth_config_from_json(const Json& j, std::string_view origin) {
  auto fail = [&](const std::string& field, const std::string& message) -> void {
    throw ParseError(std::string(origin), 1, field, message);
  };
  if (!j.is_object()) fail("", "config is not a JSON object");
  if (!j.contains("schema") || j["schema"] != kConfigSchema) fail("schema", "expected \"synth_config\"");
  if (j.contains("version") && (!j["version"].is_number_integer() || j["version"].get<int>() > schema::kVersion)) {
    fail("version", "unsupported version");
  }

  SynthConfig c;
  auto count = [&](const char* key, std::size_t& out) {
    if (!j.contains(key)) return;
    const Json& v = j[key];
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(key, "expected a non-negative integer");
    out = v.get<std::size_t>();
  };
  auto real = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) fail(key, "expected a number");
    out = j[key].get<double>();
  };
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) fail("seed", "expected an integer");
    if (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() < 0) fail("seed", "must be non-negative");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  count("corpora", c.corpora);
  count("utterances_per_corpus", c.utterances_per_corpus);
  count("recordings_per_corpus", c.recordings_per_corpus);
  count("vocabulary_size", c.vocabulary_size);
  real("low_wer_fraction", c.low_wer_fraction);
  real("feature_noise", c.feature_noise);
  real("zipf_exponent", c.zipf_exponent);
  if (j.contains("duration_range_ms")) {
    const Json& r = j["duration_range_ms"];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer()) {
      fail("duration_range_ms", "expected [min, max] integers");
    }
    c.min_duration_ms = r[0].get<std::int64_t>();
    c.max_duration_ms = r[1].get<std::int64_t>();
  }
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> known = {"schema", "version", "seed", "corpora", "utterances_per_corpus",
                                                "recordings_per_corpus", "vocabulary_size", "low_wer_fraction",
                                                "feature_noise", "zipf_exponent", "duration_range_ms"};
    if (!known.contains(key)) fail(key, "unknown field");
  }
  try {
    validate(c);
  } catch (const Error& e) {
    throw ParseError(std::string(origin), 1, "", e.what());
  }
  return c;
}

Json to_json(const SynthConfig& c) {
  Json j = Json::object();
  j["schema"] = kConfigSchema;
  j["version"] = schema::kVersion;
  j["seed"] = c.seed;
  j["corpora"] = c.corpora;
  j["utterances_per_corpus"] = c.utterances_per_corpus;
  j["recordings_per_corpus"] = c.recordings_per_corpus;
  j["vocabulary_size"] = c.vocabulary_size;
  j["low_wer_fraction"] = c.low_wer_fraction;
  j["feature_noise"] = c.feature_noise;
  j["zipf_exponent"] = c.zipf_exponent;
  j["duration_range_ms"] = Json::array({c.min_duration_ms, c.max_duration_ms});
  return j;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string(), 1, "", std::string("invalid JSON: ") + e.what());
  }
  return synth_config_from_json(j, path.string());
}

Dataset SynthOutput::dataset() const {
  DatasetBuilder builder;
  for (const auto& u : utterances) builder.add(u);
  for (const auto& h : hypotheses) builder.add(h);
  for (const auto& a : alignments) builder.add(a);
  for (const auto& a : acoustics) builder.add(a);
  return builder.build(IngestOptions{.min_duration_ms = 0});
}

namespace {

bool plain_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

// Pronounceable pseudo-words. Error words use another consonant set and end
// in 'x'.
std::string pseudo_word(std::size_t n, bool error_word) {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kErrorOnsets = "bcdghjkpqtwxyz";
  static constexpr std::string_view kVowels = "aeiou";
  const std::string_view onsets = error_word ? kErrorOnsets : kOnsets;
  std::string w;
  const std::size_t syllables = 2 + n % 2;
  for (std::size_t s = 0; s < syllables; ++s) {
    w += onsets[n % onsets.size()];
    n /= onsets.size();
    w += kVowels[n % kVowels.size()];
    n /= kVowels.size();
  }
  if (error_word) w += 'x';
  return w;
}

struct Vocabulary {
  std::vector<std::string> words;          // rank order
  std::vector<std::uint64_t> cumulative;   // Zipf weights
  std::vector<std::string> errors;         // disjoint from `words`

  const std::string& sample(Rng& rng) const {
    const std::uint64_t r = rng.index(cumulative.back());
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    return words[static_cast<std::size_t>(it - cumulative.begin())];
  }
  const std::string& error_word(Rng& rng) const { return errors[rng.index(errors.size())]; }
};

Vocabulary build_vocabulary(const SynthConfig& config, Rng& rng) {
  const auto& contractions = NormalizationTables::builtin().contractions;
  std::vector<std::string> function_words;
  std::vector<std::string> content_words;
  for (const auto& [form, entry] : LemmaTable::builtin().entries()) {
    if (!plain_word(form) || contractions.contains(form)) continue;
    (entry.pos == Pos::kPron || entry.pos == Pos::kOther ? function_words : content_words).push_back(form);
  }
  rng.shuffle(std::span<std::string>(function_words));
  rng.shuffle(std::span<std::string>(content_words));

  Vocabulary v;
  std::set<std::string> used;
  auto take = [&](const std::string& w) {
    if (v.words.size() < config.vocabulary_size && used.insert(w).second) v.words.push_back(w);
  };
  for (const auto& w : function_words) take(w);
  for (const auto& w : content_words) take(w);
  for (std::size_t n = 0; v.words.size() < config.vocabulary_size; ++n) take(pseudo_word(n, false));

  std::uint64_t total = 0;
  for (std::size_t r = 1; r <= v.words.size(); ++r) {
    total += static_cast<std::uint64_t>(std::llround(1e12 / std::pow(static_cast<double>(r), config.zipf_exponent)));
    v.cumulative.push_back(total);
  }
  for (std::size_t n = 0; v.errors.size() < kErrorVocabularySize; ++n) {
    std::string w = pseudo_word(n * 7919 + 13, true);
    if (!used.contains(w)) {
      used.insert(w);
      v.errors.push_back(std::move(w));
    }
  }
  return v;
}

double round_to(double value, double scale) { return static_cast<double>(std::llround(value * scale)) / scale; }

struct Planted {
  std::vector<std::string> hypothesis;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
};

// Applies exactly `edits` edits. Deletions and insertions are never mixed and
// every substituted or inserted token comes from the error vocabulary, so the
// minimum edit distance to the reference equals `edits`.
Planted plant_edits(const std::vector<std::string>& reference, std::size_t edits, const Vocabulary& vocab,
                    Rng& rng) {
  const std::size_t n = reference.size();
  Planted p;
  const bool insert_mode = rng.bernoulli(0.5);
  std::size_t extra = 0;
  if (edits > 0) {
    // Keep at least one hypothesis word in deletion mode.
    const std::size_t max_extra = insert_mode ? edits : std::min(edits, n - 1);
    extra = static_cast<std::size_t>(rng.index(max_extra + 1));
  }
  const std::size_t subs = edits - extra;

  std::vector<std::size_t> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = i;
  rng.shuffle(std::span<std::size_t>(positions));
  std::vector<char> action(n, 'M');
  for (std::size_t k = 0; k < subs; ++k) action[positions[k]] = 'S';
  if (!insert_mode) {
    for (std::size_t k = 0; k < extra; ++k) action[positions[subs + k]] = 'D';
  }
  // Insertions go before slot i (i == n appends).
  std::vector<std::size_t> inserts_before(n + 1, 0);
  if (insert_mode) {
    for (std::size_t k = 0; k < extra; ++k) ++inserts_before[rng.index(n + 1)];
  }

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t k = 0; k < inserts_before[i]; ++k) p.hypothesis.push_back(vocab.error_word(rng));
    if (i == n) break;
    switch (action[i]) {
      case 'M': p.hypothesis.push_back(reference[i]); break;
      case 'S': p.hypothesis.push_back(vocab.error_word(rng)); break;
      default: break;
    }
  }
  p.substitutions = subs;
  (insert_mode ? p.insertions : p.deletions) = extra;
  return p;
}

// Largest edit count whose WER is still labeled LOW.
std::size_t max_low_edits(std::size_t n) {
  std::size_t e = 0;
  while (e < n && make_label(static_cast<double>(e + 1) / static_cast<double>(n)) == WerClass::kLow) ++e;
  return e;
}

struct FeatureModel {
  double offset;
  double slope;
  double step;
  double noise;  // per-unit feature_noise, shared by the utterance
  double word_noise;
};

// Value for WER w before noise: strictly decreasing with a step at the
// class threshold, so the classes are linearly separable without noise.
double shape(const FeatureModel& m, double wer) {
  const double high = make_label(wer) == WerClass::kHigh ? 1.0 : 0.0;
  return m.offset - m.slope * wer - m.step * high;
}

constexpr FeatureModel kStrongLp{-0.5, 1.2, 1.0, 0.6, 0.3};
constexpr FeatureModel kWeakLp{-0.8, 1.4, 1.0, 0.6, 0.3};
constexpr FeatureModel kAlignLp{-0.6, 1.0, 1.0, 0.6, 0.3};
constexpr FeatureModel kSnr{22.0, 12.0, 6.0, 6.0, 0.0};
constexpr FeatureModel kC50{35.0, 10.0, 5.0, 5.0, 0.0};

std::vector<double> word_logprobs(const FeatureModel& m, double wer, std::size_t count, double noise, Rng& rng) {
  const double base = shape(m, wer) + noise * m.noise * rng.normal();
  std::vector<double> out(count);
  for (auto& lp : out) lp = std::min(0.0, round_to(base + noise * m.word_noise * rng.normal(), 1e4));
  return out;
}

std::string reference_text(const std::vector<std::string>& words, Rng& rng) {
  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text += ' ';
    text += w;
  }
  text[0] = static_cast<char>(text[0] - 'a' + 'A');
  text += rng.bernoulli(0.3) ? "?" : ".";
  return text;
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
  validate(config);
  Rng rng(config.seed);
  const Vocabulary vocab = build_vocabulary(config, rng);
  const double noise = config.feature_noise;

  SynthOutput out;
  for (std::size_t c = 0; c < config.corpora; ++c) {
    const std::string corpus = synth_corpus_name(c);
    const std::size_t count = config.utterances_per_corpus;

    std::vector<std::int64_t> durations(count);
    std::int64_t total_ms = 0;
    for (auto& d : durations) {
      d = config.min_duration_ms +
          static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(config.max_duration_ms - config.min_duration_ms + 1)));
      total_ms += d;
    }

    // LOW class by duration share: visit in random order and fill the LOW
    // budget first.
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<bool> low(count, false);
    const double budget = config.low_wer_fraction * static_cast<double>(total_ms);
    std::int64_t low_ms = 0;
    for (std::size_t i : order) {
      if (static_cast<double>(low_ms) + 0.5 * static_cast<double>(durations[i]) <= budget) {
        low[i] = true;
        low_ms += durations[i];
      }
    }

    std::vector<std::int64_t> cursor(config.recordings_per_corpus, 0);
    for (std::size_t i = 0; i < count; ++i) {
      char id[64];
      std::snprintf(id, sizeof id, "%s_%05zu", corpus.c_str(), i + 1);
      const std::size_t rec = i * config.recordings_per_corpus / count;
      char recording[64];
      std::snprintf(recording, sizeof recording, "%s_rec%02zu", corpus.c_str(), rec + 1);

      const std::int64_t start_ms = cursor[rec] + 200 + static_cast<std::int64_t>(rng.index(3000));
      const std::int64_t end_ms = start_ms + durations[i];
      cursor[rec] = end_ms;

      // Roughly 2.5 words per second of speech.
      const std::size_t n_words =
          std::max<std::size_t>(1, static_cast<std::size_t>(durations[i] / 400) + rng.index(3));
      std::vector<std::string> reference;
      for (std::size_t k = 0; k < n_words; ++k) reference.push_back(vocab.sample(rng));

      const std::size_t low_cap = max_low_edits(n_words);
      std::size_t edits = 0;
      if (low[i]) {
        if (low_cap > 0 && !rng.bernoulli(0.6)) edits = 1 + rng.index(low_cap);
      } else {
        edits = low_cap + 1 + rng.index(n_words - low_cap);
      }
      Planted strong = plant_edits(reference, edits, vocab, rng);
      const double wer = static_cast<double>(edits) / static_cast<double>(n_words);

      // The weak engine makes the strong engine's errors plus its own.
      std::vector<std::string> weak_words = strong.hypothesis;
      const double extra_rate =
          std::clamp(0.05 + 0.3 * wer + 0.1 * (make_label(wer) == WerClass::kHigh) + noise * 0.1 * rng.normal(),
                     0.0, 1.0);
      for (auto& w : weak_words) {
        if (rng.bernoulli(extra_rate)) {
          std::string replacement;
          do {
            replacement = vocab.error_word(rng);
          } while (replacement == w);
          w = std::move(replacement);
        }
      }

      UtteranceRecord u;
      u.id = id;
      u.corpus = corpus;
      u.recording = recording;
      u.start_s = static_cast<double>(start_ms) / 1000.0;
      u.end_s = static_cast<double>(end_ms) / 1000.0;
      u.speaker = rng.bernoulli(0.7) ? "FEM" : "MAL";
      u.reference = reference_text(reference, rng);

      auto to_hypothesis = [&](Engine engine, const std::vector<std::string>& words, const FeatureModel& m) {
        HypothesisRecord h;
        h.utterance_id = u.id;
        h.engine = engine;
        const auto lps = word_logprobs(m, wer, words.size(), noise, rng);
        for (std::size_t k = 0; k < words.size(); ++k) h.words.push_back({words[k], lps[k], std::nullopt, std::nullopt});
        return h;
      };
      HypothesisRecord weak = to_hypothesis(Engine::kWeak, weak_words, kWeakLp);
      HypothesisRecord strong_h = to_hypothesis(Engine::kStrong, strong.hypothesis, kStrongLp);

      AlignmentRecord alignment;
      alignment.utterance_id = u.id;
      const auto align_lps = word_logprobs(kAlignLp, wer, strong.hypothesis.size(), noise, rng);
      for (std::size_t k = 0; k < strong.hypothesis.size(); ++k) {
        alignment.words.push_back({strong.hypothesis[k], align_lps[k]});
      }

      AcousticsRecord acoustics;
      acoustics.utterance_id = u.id;
      acoustics.snr_db = round_to(shape(kSnr, wer) + noise * kSnr.noise * rng.normal(), 100.0);
      acoustics.c50_db = round_to(shape(kC50, wer) + noise * kC50.noise * rng.normal(), 100.0);

      TruthRecord truth;
      truth.utterance_id = u.id;
      truth.corpus = corpus;
      truth.reference_words = n_words;
      truth.substitutions = strong.substitutions;
      truth.deletions = strong.deletions;
      truth.insertions = strong.insertions;

      out.utterances.push_back(std::move(u));
      out.hypotheses.push_back(std::move(weak));
      out.hypotheses.push_back(std::move(strong_h));
      out.alignments.push_back(std::move(alignment));
      out.acoustics.push_back(acoustics);
      out.truth.push_back(std::move(truth));
    }
  }
  return out;
}

namespace {

Json truth_to_json(const TruthRecord& t) {
  Json j = Json::object();
  j["utterance_id"] = t.utterance_id;
  j["corpus"] = t.corpus;
  j["reference_words"] = t.reference_words;
  j["substitutions"] = t.substitutions;
  j["deletions"] = t.deletions;
  j["insertions"] = t.insertions;
  j["wer"] = t.wer();
  return j;
}

}  // namespace

void write_synth(const SynthOutput& output, const std::filesystem::path& directory) {
  write_dataset(output.dataset(), directory);
  std::string truth = dump_line(make_header(schema::kTruth)) + "\n";
  for (const auto& t : output.truth) truth += dump_line(truth_to_json(t)) + "\n";
  io::write_file_atomic(directory / "truth.jsonl", truth);
}

std::map<std::string, double> true_wer_table(const SynthConfig& config) {
  std::map<std::string, double> table;
  for (const auto& t : generate(config).truth) table.emplace(t.utterance_id, t.wer());
  return table;
}

std::vector<TruthRecord> load_truth(const std::filesystem::path& path) {
  const std::string file = path.string();
  const std::string text = io::read_file(path);
  std::vector<TruthRecord> out;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (std::string_view line : io::split_lines(text)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const LineContext where{file, line_no};
    const Json j = parse_json_line(line, where);
    if (!header_seen) {
      const FileHeader h = header_from_json(j, where);
      if (h.schema != schema::kTruth) throw ParseError(file, line_no, "schema", "expected \"truth\"");
      header_seen = true;
      continue;
    }
    auto count = [&](const char* key) -> std::size_t {
      if (!j.contains(key) || !j[key].is_number_unsigned()) {
        throw ParseError(file, line_no, key, "expected a non-negative integer");
      }
      return j[key].get<std::size_t>();
    };
    TruthRecord t;
    if (!j.contains("utterance_id") || !j["utterance_id"].is_string()) {
      throw ParseError(file, line_no, "utterance_id", "expected a string");
    }
    t.utterance_id = j["utterance_id"].get<std::string>();
    t.corpus = j.value("corpus", "");
    t.reference_words = count("reference_words");
    if (t.reference_words == 0) throw ParseError(file, line_no, "reference_words", "must be positive");
    t.substitutions = count("substitutions");
    t.deletions = count("deletions");
    t.insertions = count("insertions");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace asrsel
