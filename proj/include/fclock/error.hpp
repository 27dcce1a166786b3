#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fclock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A physical parameter is out of its domain (non-positive gamma, zero velocity, ...).
class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A state vector or qubit violates its normalization or finiteness invariant.
class InvalidState : public Error {
public:
  using Error::Error;
};

/// A tensor product would exceed the configured dimension cap.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// Unknown, duplicate or disconnected node/channel references.
class TopologyError : public Error {
public:
  using Error::Error;
};

/// An event was scheduled in the past.
class CausalityError : public Error {
public:
  using Error::Error;
};

/// An event log is malformed (decay without a matching excitation).
class IntegrityError : public Error {
public:
  using Error::Error;
};

class InsufficientData : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Scenario syntax or semantic error, carrying the 1-based line number.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

}  // namespace fclock
