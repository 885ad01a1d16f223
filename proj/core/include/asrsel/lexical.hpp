#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "asrsel/corpus.hpp"
#include "asrsel/tagger.hpp"
#include "asrsel/text_normalize.hpp"

namespace asrsel {

/// Manual and automatic transcripts of one utterance, already tagged.
struct TranscriptPair {
  std::string utterance_id;
  std::vector<TaggedToken> manual;
  std::vector<TaggedToken> automatic;
};

/// Normalizes and tags the reference (manual) and strong hypothesis
/// (automatic) of every utterance that has both. Tags from `external`, when
/// given, replace the built-in tagger for the (utterance, source) pairs they
/// cover.
std::vector<TranscriptPair> build_transcript_pairs(const Dataset& dataset, const NormalizationPolicy& policy = {},
                                                   const TaggedCorpus* external = nullptr,
                                                   const LemmaTable& table = LemmaTable::builtin());

enum class Scope { kAllUtterances, kSelectedUtterances };

std::string_view to_string(Scope scope);

struct LemmaKey {
  std::string lemma;
  Pos pos = Pos::kOther;

  auto operator<=>(const LemmaKey&) const = default;
};

struct PairCounts {
  std::uint64_t manual = 0;
  std::uint64_t automatic = 0;

  bool operator==(const PairCounts&) const = default;
};

/// Counts over the union vocabulary of both sources; a lemma missing from one
/// source has count 0 there.
struct FrequencyTable {
  std::map<LemmaKey, PairCounts> entries;
  Scope scope = Scope::kAllUtterances;

  std::uint64_t total_manual() const;
  std::uint64_t total_automatic() const;
  /// Counts with POS distinctions collapsed, keyed by lemma only.
  std::map<std::string, PairCounts> by_lemma() const;
};

/// With Scope::kSelectedUtterances only pairs whose id is in `selected` count.
FrequencyTable count_lemmas(std::span<const TranscriptPair> pairs, Scope scope = Scope::kAllUtterances,
                            const std::set<std::string>& selected = {});

struct LogCounts {
  std::vector<double> manual;
  std::vector<double> automatic;
};

/// log10(count + 1) per entry, in key order.
LogCounts log_counts(const FrequencyTable& table);
double log_count(std::uint64_t count);

/// Pearson product-moment correlation. nullopt when either vector is constant
/// or shorter than 2. Throws Error on a length mismatch.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationRow {
  std::string category;          // "all words", "nouns", ...
  std::optional<Pos> pos;        // empty for "all words"
  std::optional<double> r;       // empty when fewer than 2 entries survive
  std::size_t n_entries = 0;
  double mean_manual_count = 0.0;
  double mean_automatic_count = 0.0;
};

/// Filters entries by POS membership and automatic count, then correlates the
/// log counts. Without a POS filter entries are aggregated by lemma only.
CorrelationRow correlation_report(const FrequencyTable& table, const std::optional<std::set<Pos>>& pos_filter,
                                  std::uint64_t min_auto_count = 0);

/// Rows in the fixed order all words, nouns, verbs, adjectives, adverbs, pronouns.
std::vector<CorrelationRow> correlation_table(const FrequencyTable& table, std::uint64_t min_auto_count = 0);

struct ScatterPoint {
  std::string lemma;
  std::uint64_t manual = 0;
  std::uint64_t automatic = 0;
  double log_manual = 0.0;
  double log_automatic = 0.0;
  bool labeled = false;
};

/// Least-squares line log_automatic = intercept + slope * log_manual.
struct FittedLine {
  double intercept = 0.0;
  double slope = 0.0;
  std::optional<double> r;
  std::size_t n = 0;
};

std::optional<FittedLine> fit_line(std::span<const double> x, std::span<const double> y);

struct ScatterData {
  std::vector<ScatterPoint> points;
  std::optional<FittedLine> all_line;
  /// Fitted on points whose automatic count is >= min_auto_count.
  std::optional<FittedLine> filtered_line;
  std::uint64_t min_auto_count = 0;
  std::string title;
};

/// Points are aggregated by lemma (or restricted to `pos_filter`). At most
/// `label_limit` points are labeled, chosen by the highest combined count
/// (ties by lemma).
ScatterData scatter_data(const FrequencyTable& table, std::uint64_t min_auto_count,
                         const std::optional<std::set<Pos>>& pos_filter = std::nullopt,
                         std::size_t label_limit = 30);

/// Tab-separated export: header, then lemma, pos, manual_count, auto_count.
std::string frequency_tsv(const FrequencyTable& table);

}  // namespace asrsel
