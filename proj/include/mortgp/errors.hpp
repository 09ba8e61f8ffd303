#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mortgp {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `row()` is the 1-based line number (header = 1),
/// or 0 when the problem is not tied to a row.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t row)
      : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what),
        row_(row) {}

  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

/// Factorization or other linear-algebra failure.
class NumericalError : public Error {
public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
public:
  using Error::Error;
};

} // namespace mortgp
