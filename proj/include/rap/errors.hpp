#pragma once

#include <stdexcept>
#include <string>

namespace rap {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// Malformed input line; carries the 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string &what, size_t line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  size_t line() const { return line_; }

private:
  size_t line_;
};

// Structural invariant violated (dangling edge, cycle, conflicting ids, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

// A node id did not resolve in the schema graph.
class NodeNotFound : public Error {
public:
  explicit NodeNotFound(const std::string &what) : Error(what) {}
};

// A gold label names a type missing from the schema graph.
class UnknownLabel : public Error {
public:
  using Error::Error;
};

// An entry id is outside the retrieval index.
class EntryNotFound : public Error {
public:
  using Error::Error;
};

class InvalidK : public Error {
public:
  using Error::Error;
};

class InvalidFraction : public Error {
public:
  using Error::Error;
};

// Span offsets fall outside the record text.
class SpanError : public Error {
public:
  using Error::Error;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

// Gold and prediction record ids do not line up.
class AlignmentError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace rap
