#include "asrsel/tagger.hpp"

#include <array>

#include "asrsel/error.hpp"
#include "asrsel/io.hpp"
#include "asrsel/records.hpp"

namespace asrsel {

namespace embedded {
extern const std::string_view lemma_exceptions;
}  // namespace embedded

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "NOUN";
    case Pos::kVerb: return "VERB";
    case Pos::kAdj: return "ADJ";
    case Pos::kAdv: return "ADV";
    case Pos::kPron: return "PRON";
    case Pos::kOther: return "OTHER";
  }
  return "OTHER";
}

std::optional<Pos> parse_pos(std::string_view tag) {
  if (tag == "NOUN") return Pos::kNoun;
  if (tag == "VERB") return Pos::kVerb;
  if (tag == "ADJ") return Pos::kAdj;
  if (tag == "ADV") return Pos::kAdv;
  if (tag == "PRON") return Pos::kPron;
  if (tag.empty()) return std::nullopt;
  for (char c : tag) {
    if (c < 'A' || c > 'Z') return std::nullopt;
  }
  return Pos::kOther;
}

std::string_view to_string(TranscriptSource source) {
  return source == TranscriptSource::kManual ? "manual" : "automatic";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && !is_vowel(c); }

// "runn" -> true (run + doubled n); "fall" -> false (ll is lexical).
bool doubled_final_consonant(std::string_view s) {
  if (s.size() < 3) return false;
  char last = s.back();
  return last == s[s.size() - 2] && is_consonant(last) && last != 'l' && last != 's' && last != 'z';
}

// Short consonant-vowel-consonant stems usually lost a final 'e': "mak" -> "make".
bool needs_silent_e(std::string_view s) {
  if (s.size() != 3) return false;
  char last = s[2];
  return is_consonant(s[0]) && is_vowel(s[1]) && is_consonant(last) && last != 'w' && last != 'x' &&
         last != 'y';
}

// Candidate stems for a verbal suffix, most specific first; the fallback is
// the first candidate that the heuristics prefer.
std::vector<std::string> verbal_stems(std::string_view base) {
  std::vector<std::string> out;
  if (doubled_final_consonant(base)) out.emplace_back(base.substr(0, base.size() - 1));
  out.emplace_back(std::string(base) + "e");
  out.emplace_back(base);
  return out;
}

std::string verbal_fallback(std::string_view base) {
  if (doubled_final_consonant(base)) return std::string(base.substr(0, base.size() - 1));
  if (needs_silent_e(base)) return std::string(base) + "e";
  return std::string(base);
}

struct Analysis {
  std::vector<std::string> candidates;
  std::string fallback;
  Pos pos;
};

std::optional<Analysis> analyze_suffix(std::string_view w) {
  const std::size_t n = w.size();
  if (ends_with(w, "ies") && n >= 5) {
    std::string base(w.substr(0, n - 3));
    return Analysis{{base + "y", base + "ie"}, base + "y", Pos::kNoun};
  }
  if (ends_with(w, "ing") && n >= 5) {
    auto base = w.substr(0, n - 3);
    return Analysis{verbal_stems(base), verbal_fallback(base), Pos::kVerb};
  }
  if (ends_with(w, "ed") && n >= 4) {
    auto base = w.substr(0, n - 2);
    return Analysis{verbal_stems(base), verbal_fallback(base), Pos::kVerb};
  }
  if (ends_with(w, "es") && n >= 4) {
    auto base = w.substr(0, n - 2);
    if (ends_with(base, "s") || ends_with(base, "x") || ends_with(base, "z") || ends_with(base, "ch") ||
        ends_with(base, "sh")) {
      return Analysis{{std::string(base)}, std::string(base), Pos::kNoun};
    }
  }
  if (ends_with(w, "s") && n >= 4 && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) {
    std::string base(w.substr(0, n - 1));
    return Analysis{{base}, base, Pos::kNoun};
  }
  // Derivational suffixes only decide the POS; the lemma is the word itself.
  static constexpr std::array<std::pair<std::string_view, Pos>, 13> kDerivational{{
      {"ly", Pos::kAdv},     {"ness", Pos::kNoun}, {"ment", Pos::kNoun}, {"tion", Pos::kNoun},
      {"sion", Pos::kNoun},  {"ity", Pos::kNoun},  {"ful", Pos::kAdj},   {"ous", Pos::kAdj},
      {"ive", Pos::kAdj},    {"able", Pos::kAdj},  {"ible", Pos::kAdj},  {"less", Pos::kAdj},
      {"ish", Pos::kAdj},
  }};
  for (const auto& [suffix, pos] : kDerivational) {
    if (ends_with(w, suffix) && n >= suffix.size() + 3) return Analysis{{std::string(w)}, std::string(w), pos};
  }
  return std::nullopt;
}

}  // namespace

LemmaTable LemmaTable::parse(std::string_view text, std::string_view origin) {
  LemmaTable table;
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw ParseError(std::string(origin), i + 1, "", "expected 'form<TAB>lemma<TAB>pos'");
    }
    auto pos = parse_pos(line.substr(t2 + 1));
    std::string lemma = lower(line.substr(t1 + 1, t2 - t1 - 1));
    if (!pos || lemma.empty() || t1 == 0) throw ParseError(std::string(origin), i + 1, "", "invalid entry");
    table.entries_.insert_or_assign(std::string(line.substr(0, t1)), Entry{std::move(lemma), *pos});
  }
  return table;
}

LemmaTable LemmaTable::from_file(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.filename().string());
}

const LemmaTable& LemmaTable::builtin() {
  static const LemmaTable table = parse(embedded::lemma_exceptions, "lemma_exceptions.tsv");
  return table;
}

const LemmaTable::Entry* LemmaTable::find(std::string_view form) const {
  auto it = entries_.find(form);
  return it == entries_.end() ? nullptr : &it->second;
}

TaggedToken tag_token(std::string_view token, const LemmaTable& table) {
  const std::string w = lower(token);
  if (const auto* e = table.find(w)) return {std::string(token), e->lemma, e->pos};
  if (auto analysis = analyze_suffix(w)) {
    for (const auto& stem : analysis->candidates) {
      if (const auto* e = table.find(stem)) return {std::string(token), e->lemma, e->pos};
    }
    return {std::string(token), analysis->fallback, analysis->pos};
  }
  return {std::string(token), w.empty() ? std::string("_") : w, Pos::kOther};
}

std::vector<TaggedToken> tag(const std::vector<std::string>& tokens, const LemmaTable& table) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(tag_token(t, table));
  return out;
}

TaggedCorpus load_tagged(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  const std::string content = io::read_file(path);
  const auto lines = io::split_lines(content);
  TaggedCorpus corpus;
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string_view::npos) continue;
    const LineContext where{name, i + 1};
    Json j = parse_json_line(lines[i], where);
    auto fail = [&](std::string_view field, const std::string& msg) -> void {
      throw ParseError(name, i + 1, std::string(field), msg);
    };
    if (!have_header) {
      auto header = header_from_json(j, where);
      if (header.schema != schema::kTagged) fail("schema", "expected schema 'tagged', got '" + header.schema + "'");
      have_header = true;
      continue;
    }
    if (!j.is_object()) fail("", "record is not a JSON object");
    if (!j.contains("utterance_id") || !j["utterance_id"].is_string() || j["utterance_id"].get<std::string>().empty())
      fail("utterance_id", "expected a non-empty string");
    if (!j.contains("source") || !j["source"].is_string()) fail("source", "expected a string");
    TaggedKey key{j["utterance_id"].get<std::string>(), TranscriptSource::kManual};
    const auto source = j["source"].get<std::string>();
    if (source == "automatic") {
      key.source = TranscriptSource::kAutomatic;
    } else if (source != "manual") {
      fail("source", "expected \"manual\" or \"automatic\"");
    }
    if (!j.contains("tokens") || !j["tokens"].is_array()) fail("tokens", "expected an array");
    std::vector<TaggedToken> tokens;
    for (const auto& jt : j["tokens"]) {
      if (!jt.is_object()) fail("tokens", "each token must be an object");
      for (const char* f : {"surface", "lemma", "pos"}) {
        if (!jt.contains(f) || !jt[f].is_string()) fail(std::string("tokens.") + f, "expected a string");
      }
      std::string lemma = lower(jt["lemma"].get<std::string>());
      if (lemma.empty()) fail("tokens.lemma", "must not be empty");
      auto pos = parse_pos(jt["pos"].get<std::string>());
      if (!pos) fail("tokens.pos", "unknown part-of-speech tag '" + jt["pos"].get<std::string>() + "'");
      tokens.push_back({jt["surface"].get<std::string>(), std::move(lemma), *pos});
    }
    if (!corpus.emplace(key, std::move(tokens)).second) {
      fail("utterance_id", "duplicate tags for utterance '" + key.utterance_id + "' (" +
                               std::string(to_string(key.source)) + ")");
    }
  }
  return corpus;
}

}  // namespace asrsel
