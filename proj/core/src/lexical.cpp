#include "asrsel/lexical.hpp"

#include <algorithm>
#include <cmath>

#include "asrsel/error.hpp"

namespace asrsel {

std::string_view to_string(Scope scope) {
  return scope == Scope::kAllUtterances ? "all_utterances" : "selected_utterances";
}

std::vector<TranscriptPair> build_transcript_pairs(const Dataset& dataset, const NormalizationPolicy& policy,
                                                   const TaggedCorpus* external, const LemmaTable& table) {
  std::vector<TranscriptPair> pairs;
  auto tokens_for = [&](const std::string& id, TranscriptSource source, const std::string& text) {
    if (external) {
      auto it = external->find(TaggedKey{id, source});
      if (it != external->end()) return it->second;
    }
    return tag(normalize(text, policy), table);
  };
  for (const auto& [id, b] : dataset.utterances()) {
    if (!b.utterance.reference || !b.strong) continue;
    pairs.push_back({id, tokens_for(id, TranscriptSource::kManual, *b.utterance.reference),
                     tokens_for(id, TranscriptSource::kAutomatic, b.strong->transcript())});
  }
  return pairs;
}

std::uint64_t FrequencyTable::total_manual() const {
  std::uint64_t s = 0;
  for (const auto& [k, c] : entries) s += c.manual;
  return s;
}

std::uint64_t FrequencyTable::total_automatic() const {
  std::uint64_t s = 0;
  for (const auto& [k, c] : entries) s += c.automatic;
  return s;
}

std::map<std::string, PairCounts> FrequencyTable::by_lemma() const {
  std::map<std::string, PairCounts> out;
  for (const auto& [k, c] : entries) {
    auto& slot = out[k.lemma];
    slot.manual += c.manual;
    slot.automatic += c.automatic;
  }
  return out;
}

FrequencyTable count_lemmas(std::span<const TranscriptPair> pairs, Scope scope, const std::set<std::string>& selected) {
  FrequencyTable t;
  t.scope = scope;
  for (const auto& p : pairs) {
    if (scope == Scope::kSelectedUtterances && !selected.count(p.utterance_id)) continue;
    for (const auto& tok : p.manual) ++t.entries[{tok.lemma, tok.pos}].manual;
    for (const auto& tok : p.automatic) ++t.entries[{tok.lemma, tok.pos}].automatic;
  }
  return t;
}

double log_count(std::uint64_t count) { return std::log10(static_cast<double>(count) + 1.0); }

LogCounts log_counts(const FrequencyTable& table) {
  LogCounts out;
  for (const auto& [k, c] : table.entries) {
    out.manual.push_back(log_count(c.manual));
    out.automatic.push_back(log_count(c.automatic));
  }
  return out;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson: vectors differ in length");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  const bool x_const = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  const bool y_const = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
  if (x_const || y_const) return std::nullopt;

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::string category_name(const std::optional<std::set<Pos>>& filter) {
  if (!filter) return "all words";
  std::string out;
  for (Pos p : *filter) {
    if (!out.empty()) out += "+";
    switch (p) {
      case Pos::kNoun: out += "nouns"; break;
      case Pos::kVerb: out += "verbs"; break;
      case Pos::kAdj: out += "adjectives"; break;
      case Pos::kAdv: out += "adverbs"; break;
      case Pos::kPron: out += "pronouns"; break;
      case Pos::kOther: out += "other"; break;
    }
  }
  return out;
}

// (label, counts) for every entry surviving the POS filter; lemma-only
// aggregation when there is no filter.
std::vector<std::pair<std::string, PairCounts>> filtered_entries(const FrequencyTable& table,
                                                                 const std::optional<std::set<Pos>>& filter) {
  std::vector<std::pair<std::string, PairCounts>> out;
  if (!filter) {
    for (auto& [lemma, c] : table.by_lemma()) out.emplace_back(lemma, c);
    return out;
  }
  for (const auto& [k, c] : table.entries) {
    if (!filter->count(k.pos)) continue;
    std::string label = k.lemma;
    if (filter->size() > 1) label += "/" + std::string(to_string(k.pos));
    out.emplace_back(std::move(label), c);
  }
  return out;
}

}  // namespace

CorrelationRow correlation_report(const FrequencyTable& table, const std::optional<std::set<Pos>>& pos_filter,
                                  std::uint64_t min_auto_count) {
  CorrelationRow row;
  row.category = category_name(pos_filter);
  if (pos_filter && pos_filter->size() == 1) row.pos = *pos_filter->begin();

  std::vector<double> xs;
  std::vector<double> ys;
  double sum_manual = 0.0;
  double sum_auto = 0.0;
  for (const auto& [label, c] : filtered_entries(table, pos_filter)) {
    if (c.automatic < min_auto_count) continue;
    xs.push_back(log_count(c.manual));
    ys.push_back(log_count(c.automatic));
    sum_manual += static_cast<double>(c.manual);
    sum_auto += static_cast<double>(c.automatic);
  }
  row.n_entries = xs.size();
  if (!xs.empty()) {
    row.mean_manual_count = sum_manual / static_cast<double>(xs.size());
    row.mean_automatic_count = sum_auto / static_cast<double>(xs.size());
  }
  row.r = pearson(xs, ys);
  return row;
}

std::vector<CorrelationRow> correlation_table(const FrequencyTable& table, std::uint64_t min_auto_count) {
  std::vector<CorrelationRow> rows;
  rows.push_back(correlation_report(table, std::nullopt, min_auto_count));
  for (Pos p : {Pos::kNoun, Pos::kVerb, Pos::kAdj, Pos::kAdv, Pos::kPron}) {
    rows.push_back(correlation_report(table, std::set<Pos>{p}, min_auto_count));
  }
  return rows;
}

std::optional<FittedLine> fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("fit_line: vectors differ in length");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  FittedLine line;
  line.slope = sxy / sxx;
  line.intercept = my - line.slope * mx;
  line.r = pearson(x, y);
  line.n = n;
  return line;
}

ScatterData scatter_data(const FrequencyTable& table, std::uint64_t min_auto_count,
                         const std::optional<std::set<Pos>>& pos_filter, std::size_t label_limit) {
  ScatterData doc;
  doc.min_auto_count = min_auto_count;
  doc.title = category_name(pos_filter);

  std::vector<double> xs, ys, fx, fy;
  for (auto& [label, c] : filtered_entries(table, pos_filter)) {
    ScatterPoint p;
    p.lemma = label;
    p.manual = c.manual;
    p.automatic = c.automatic;
    p.log_manual = log_count(c.manual);
    p.log_automatic = log_count(c.automatic);
    xs.push_back(p.log_manual);
    ys.push_back(p.log_automatic);
    if (c.automatic >= min_auto_count) {
      fx.push_back(p.log_manual);
      fy.push_back(p.log_automatic);
    }
    doc.points.push_back(std::move(p));
  }
  doc.all_line = fit_line(xs, ys);
  doc.filtered_line = fit_line(fx, fy);

  std::vector<std::size_t> order(doc.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = doc.points[a];
    const auto& pb = doc.points[b];
    const auto ca = pa.manual + pa.automatic;
    const auto cb = pb.manual + pb.automatic;
    if (ca != cb) return ca > cb;
    return pa.lemma < pb.lemma;
  });
  for (std::size_t k = 0; k < order.size() && k < label_limit; ++k) doc.points[order[k]].labeled = true;
  return doc;
}

std::string frequency_tsv(const FrequencyTable& table) {
  std::string out = "lemma\tpos\tmanual_count\tauto_count\n";
  for (const auto& [k, c] : table.entries) {
    out += k.lemma + "\t" + std::string(to_string(k.pos)) + "\t" + std::to_string(c.manual) + "\t" +
           std::to_string(c.automatic) + "\n";
  }
  return out;
}

}  // namespace asrsel
