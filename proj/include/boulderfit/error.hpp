#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boulderfit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the file readers. line is 1-based and counts the header row.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, std::string column, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": column '" + column + "': " + what),
        file_(std::move(file)),
        line_(line),
        column_(std::move(column)) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string column_;
};

}  // namespace boulderfit
