#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asrsel/corpus.hpp"
#include "asrsel/records.hpp"

namespace asrsel {

struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t corpora = 4;
  std::size_t utterances_per_corpus = 150;
  std::size_t recordings_per_corpus = 10;
  std::size_t vocabulary_size = 400;
  double low_wer_fraction = 0.37;
  /// 0 makes every confidence and acoustic feature an exact monotone
  /// function of WER with a step at the class threshold.
  double feature_noise = 0.0;
  std::int64_t min_duration_ms = 300;
  std::int64_t max_duration_ms = 2400;
  double zipf_exponent = 1.1;

  bool operator==(const SynthConfig&) const = default;
};

/// Throws Error describing the first invalid field.
void validate(const SynthConfig& config);

/// Config files are a single JSON object with a "schema": "synth_config"
/// field; missing optional fields take the defaults above.
SynthConfig synth_config_from_json(const Json& j, std::string_view origin = "<config>");
Json to_json(const SynthConfig& config);
SynthConfig load_synth_config(const std::filesystem::path& path);

/// What the generator planted for one utterance.
struct TruthRecord {
  std::string utterance_id;
  std::string corpus;
  std::size_t reference_words = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;

  std::size_t edits() const { return substitutions + deletions + insertions; }
  double wer() const { return static_cast<double>(edits()) / static_cast<double>(reference_words); }

  bool operator==(const TruthRecord&) const = default;
};

struct SynthOutput {
  std::vector<UtteranceRecord> utterances;    // id order
  std::vector<HypothesisRecord> hypotheses;   // id order, weak before strong
  std::vector<AlignmentRecord> alignments;
  std::vector<AcousticsRecord> acoustics;
  std::vector<TruthRecord> truth;

  /// Joins the records without a duration filter.
  Dataset dataset() const;
};

/// Deterministic: equal configs give bit-identical output on every platform.
SynthOutput generate(const SynthConfig& config);

/// Writes utterances, hypotheses, alignment, acoustics and truth `.jsonl`
/// files into `directory`.
void write_synth(const SynthOutput& output, const std::filesystem::path& directory);

/// Planted WER of the strong hypothesis, per utterance id.
std::map<std::string, double> true_wer_table(const SynthConfig& config);

std::vector<TruthRecord> load_truth(const std::filesystem::path& path);

/// Corpus tags used for the first few corpora; later ones are "C09", "C10"...
std::string synth_corpus_name(std::size_t index);

}  // namespace asrsel
