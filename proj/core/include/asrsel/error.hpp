#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asrsel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A record file violated its schema. Carries enough context to point the
/// user at the offending byte range.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, std::string field, const std::string& message);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }
  /// Message without the location prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
  std::string detail_;
};

/// Input data is well formed but unusable (duplicates, degenerate classes, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace asrsel
