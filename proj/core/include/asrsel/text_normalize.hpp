#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace asrsel {

/// How a raw transcript is turned into scoring tokens. A pure description:
/// equal policies give equal outputs on equal inputs.
struct NormalizationPolicy {
  bool lowercase = true;
  /// Apostrophes between two word characters ("it's") survive.
  bool strip_punctuation = true;
  bool expand_contractions = false;
  bool spell_out_numerals = false;
  /// Removes bracketed annotation spans such as "[laughs]" or "[...]".
  bool drop_annotation_markup = true;

  bool operator==(const NormalizationPolicy&) const = default;
};

/// Tab-separated two-column table (form, replacement). '#' starts a comment
/// line; blank lines are ignored.
using ReplacementTable = std::map<std::string, std::string, std::less<>>;

ReplacementTable parse_replacement_table(std::string_view text, std::string_view origin = "<table>");

struct NormalizationTables {
  ReplacementTable contractions;
  /// Base numerals ("0".."19", tens, "100", "1000", "1000000"); other integers
  /// below one billion are composed from these entries.
  ReplacementTable numerals;

  /// Tables compiled into the library from core/data.
  static const NormalizationTables& builtin();
  static NormalizationTables from_files(const std::filesystem::path& contractions,
                                        const std::filesystem::path& numerals);
};

std::vector<std::string> normalize(std::string_view text, const NormalizationPolicy& policy = {},
                                   const NormalizationTables& tables = NormalizationTables::builtin());

/// Tokens joined with single spaces.
std::string join_tokens(const std::vector<std::string>& tokens);

/// Spells out a string of ASCII digits ("20" -> "twenty", "105" -> "one hundred
/// five"). Returns an empty vector when the value is out of range.
std::vector<std::string> spell_out_number(std::string_view digits, const ReplacementTable& numerals);

}  // namespace asrsel
