#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gecomb {

// Base class for all library errors. The CLI maps IoError to exit status 1
// and everything else to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Two corpora disagree on sentence count or source tokens.
class AlignmentError : public Error {
 public:
  AlignmentError(std::size_t index, const std::string& what)
      : Error("sentence " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace gecomb
