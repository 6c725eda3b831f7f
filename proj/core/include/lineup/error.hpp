#pragma once

#include <stdexcept>
#include <string>

namespace lineup {

// Base of every error raised by the library. The subclasses map onto the
// failure classes reported by the command-line tool.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input text (CSV, JSON) is malformed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Datasets, schemas or metric kinds do not fit together structurally.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// An operation was called with arguments outside its domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace lineup
