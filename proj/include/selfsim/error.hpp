#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace selfsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A letter or word that does not belong to the alphabet it is used with.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

/// Product automata or searches exceeding a configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The requested object would need infinitely many first-level sections.
class InfiniteActivityError : public Error {
 public:
  using Error::Error;
};

/// An operation whose precondition on the activity class does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace selfsim
