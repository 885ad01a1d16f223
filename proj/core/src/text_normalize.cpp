#include "asrsel/text_normalize.hpp"

#include <cstdint>

#include "asrsel/error.hpp"
#include "asrsel/io.hpp"

namespace asrsel {

namespace embedded {
extern const std::string_view contractions;
extern const std::string_view numerals;
}  // namespace embedded

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Non-ASCII bytes are treated as word characters so UTF-8 letters survive.
bool is_word_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

bool is_ascii_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && u > 0x20 && u != 0x7f && !is_word_byte(c);
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = ascii_lower(c);
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

void drop_markup(std::string& s) {
  std::size_t open = s.find('[');
  while (open != std::string::npos) {
    std::size_t close = s.find(']', open + 1);
    if (close == std::string::npos) break;
    s.replace(open, close - open + 1, " ");
    open = s.find('[', open);
  }
}

void unify_apostrophes(std::string& s) {
  for (std::string_view curly : {std::string_view("\xE2\x80\x99"), std::string_view("\xE2\x80\x98")}) {
    for (std::size_t pos = s.find(curly); pos != std::string::npos; pos = s.find(curly, pos + 1)) {
      s.replace(pos, curly.size(), "'");
    }
  }
}

std::string strip_punctuation(const std::string& s) {
  std::string out(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_ascii_punct(s[i])) continue;
    const bool inner_apostrophe =
        s[i] == '\'' && i > 0 && i + 1 < s.size() && is_word_byte(s[i - 1]) && is_word_byte(s[i + 1]);
    if (!inner_apostrophe) out[i] = ' ';
  }
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

void append_words(std::vector<std::string>& out, const ReplacementTable& table, std::uint64_t key) {
  auto it = table.find(std::to_string(key));
  if (it == table.end()) throw Error("numeral table has no entry for " + std::to_string(key));
  for (auto& w : split_ws(it->second)) out.push_back(std::move(w));
}

void compose(std::vector<std::string>& out, const ReplacementTable& table, std::uint64_t n) {
  if (n < 20) {
    append_words(out, table, n);
  } else if (n < 100) {
    append_words(out, table, n / 10 * 10);
    if (n % 10) append_words(out, table, n % 10);
  } else {
    for (std::uint64_t scale : {1000000ULL, 1000ULL, 100ULL}) {
      if (n >= scale) {
        compose(out, table, n / scale);
        append_words(out, table, scale);
        if (n % scale) compose(out, table, n % scale);
        return;
      }
    }
  }
}

}  // namespace

ReplacementTable parse_replacement_table(std::string_view text, std::string_view origin) {
  ReplacementTable table;
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size()) {
      throw ParseError(std::string(origin), i + 1, "", "expected 'form<TAB>replacement'");
    }
    table.insert_or_assign(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return table;
}

const NormalizationTables& NormalizationTables::builtin() {
  static const NormalizationTables tables{
      parse_replacement_table(embedded::contractions, "contractions.tsv"),
      parse_replacement_table(embedded::numerals, "numerals.tsv")};
  return tables;
}

NormalizationTables NormalizationTables::from_files(const std::filesystem::path& contractions,
                                                    const std::filesystem::path& numerals) {
  return {parse_replacement_table(io::read_file(contractions), contractions.filename().string()),
          parse_replacement_table(io::read_file(numerals), numerals.filename().string())};
}

std::vector<std::string> spell_out_number(std::string_view digits, const ReplacementTable& numerals) {
  std::vector<std::string> out;
  if (!all_digits(digits)) return out;
  if (digits.size() > 1 && digits.front() == '0') {
    // Digit strings like "007" are read digit by digit.
    for (char c : digits) append_words(out, numerals, static_cast<std::uint64_t>(c - '0'));
    return out;
  }
  if (digits.size() > 9) return out;
  compose(out, numerals, std::stoull(std::string(digits)));
  return out;
}

std::vector<std::string> normalize(std::string_view text, const NormalizationPolicy& policy,
                                   const NormalizationTables& tables) {
  std::string s(text);
  if (policy.drop_annotation_markup) drop_markup(s);
  if (policy.lowercase) s = lower(s);
  if (policy.strip_punctuation) {
    unify_apostrophes(s);
    s = strip_punctuation(s);
  }

  std::vector<std::string> tokens;
  for (auto& token : split_ws(s)) {
    if (policy.expand_contractions) {
      auto it = tables.contractions.find(lower(token));
      if (it != tables.contractions.end()) {
        for (auto& w : split_ws(it->second)) tokens.push_back(std::move(w));
        continue;
      }
    }
    if (policy.spell_out_numerals && all_digits(token)) {
      auto words = spell_out_number(token, tables.numerals);
      if (!words.empty()) {
        for (auto& w : words) tokens.push_back(std::move(w));
        continue;
      }
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace asrsel
