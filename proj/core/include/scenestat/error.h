#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scenestat {

// Two families, mirrored by the CLI exit codes: InputError -> 2, DataError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed file content. `offset` is a byte offset for binary formats and a
// 1-based line number for text formats; see `unit`.
class ParseError : public InputError {
 public:
  enum class Unit { kByte, kLine };

  ParseError(const std::string& what, std::size_t offset, Unit unit = Unit::kByte)
      : InputError(what + (unit == Unit::kByte ? " (at byte " : " (at line ") +
                   std::to_string(offset) + ")"),
        detail_(what),
        offset_(offset),
        unit_(unit) {}

  const std::string& detail() const { return detail_; }
  std::size_t offset() const { return offset_; }
  Unit unit() const { return unit_; }

 private:
  std::string detail_;
  std::size_t offset_;
  Unit unit_;
};

class DegenerateInputError : public DataError {
 public:
  using DataError::DataError;
};

class CollinearityError : public DataError {
 public:
  CollinearityError(std::size_t column, const std::string& name)
      : DataError("design matrix is rank deficient: column " + std::to_string(column) +
                  (name.empty() ? "" : " (" + name + ")") +
                  " is a linear combination of earlier columns"),
        column_(column) {}

  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

class InsufficientSamplesError : public DataError {
 public:
  InsufficientSamplesError(std::uint64_t n_samples, std::uint64_t n_halting)
      : DataError("no sampled machine produced a qualifying output (" +
                  std::to_string(n_samples) + " samples, " + std::to_string(n_halting) +
                  " halting)"),
        n_halting_(n_halting) {}

  std::uint64_t n_halting() const { return n_halting_; }

 private:
  std::uint64_t n_halting_;
};

class UnobservedPatternError : public DataError {
 public:
  explicit UnobservedPatternError(std::vector<std::uint32_t> patterns);

  const std::vector<std::uint32_t>& patterns() const { return patterns_; }

 private:
  std::vector<std::uint32_t> patterns_;
};

}  // namespace scenestat
