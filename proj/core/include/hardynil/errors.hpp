#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hardynil {

/// Base of everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression text does not match the grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// An operation was called outside its domain (wrong growth class, window too
/// small, dependent inputs, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration does not validate.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Requested N exceeds what double-double evaluation can resolve.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace hardynil
