#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace asrsel::io {

/// Reads a whole file; throws asrsel::Error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Splits on '\n', dropping a trailing '\r' from each line. A final empty
/// segment after the last newline is not returned.
std::vector<std::string_view> split_lines(std::string_view text);

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Expands each input: directories contribute their `*.jsonl` files (sorted by
/// name, non-recursive), regular files are passed through.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::filesystem::path>& inputs);

/// printf-style fixed-point formatting, locale independent.
std::string fixed(double value, int decimals);

}  // namespace asrsel::io
