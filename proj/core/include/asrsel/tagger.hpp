#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asrsel {

/// Coarse part-of-speech classes used by the lexical analyses. Everything
/// outside the five open/pronoun classes collapses into kOther.
enum class Pos { kNoun, kVerb, kAdj, kAdv, kPron, kOther };

std::string_view to_string(Pos pos);
/// Accepts NOUN/VERB/ADJ/ADV/PRON/OTHER; any other all-caps UPOS tag (DET,
/// AUX, PROPN, ...) maps to kOther. Returns nullopt for anything else.
std::optional<Pos> parse_pos(std::string_view tag);

struct TaggedToken {
  std::string surface;
  std::string lemma;  // non-empty, lower case
  Pos pos = Pos::kOther;

  bool operator==(const TaggedToken&) const = default;
};

/// Exception table mapping a surface form to (lemma, POS).
class LemmaTable {
 public:
  struct Entry {
    std::string lemma;
    Pos pos;
  };

  static LemmaTable parse(std::string_view text, std::string_view origin = "<table>");
  static LemmaTable from_file(const std::filesystem::path& path);
  static const LemmaTable& builtin();

  const Entry* find(std::string_view form) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Entry, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

/// Deterministic lemmatizer/tagger: exception table, then suffix rules, then
/// identity with kOther. Output has one element per input token.
std::vector<TaggedToken> tag(const std::vector<std::string>& tokens,
                             const LemmaTable& table = LemmaTable::builtin());

TaggedToken tag_token(std::string_view token, const LemmaTable& table = LemmaTable::builtin());

enum class TranscriptSource { kManual, kAutomatic };

std::string_view to_string(TranscriptSource source);

struct TaggedKey {
  std::string utterance_id;
  TranscriptSource source = TranscriptSource::kManual;

  auto operator<=>(const TaggedKey&) const = default;
};

using TaggedCorpus = std::map<TaggedKey, std::vector<TaggedToken>>;

/// Reads externally produced tags (one line per utterance and source) that
/// override the built-in tagger. Throws ParseError with the line number on
/// schema violations or duplicate keys.
TaggedCorpus load_tagged(const std::filesystem::path& path);

}  // namespace asrsel
