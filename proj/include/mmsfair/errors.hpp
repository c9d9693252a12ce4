#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mmsfair {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: duplicate ids, negative values, ragged tables, bad text.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Unknown agent index or good id.
class InvalidReference : public Error {
 public:
  using Error::Error;
};

// The exact MMS search was asked for more goods or parts than it is
// configured to handle. Callers must not fall back to an approximation.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Something the analysis proves impossible happened anyway. Carries a
// JSON dump of whatever trace was available at the failure point.
class InternalInvariantError : public Error {
 public:
  InternalInvariantError(const std::string& what, std::string trace)
      : Error(what), trace_(std::move(trace)) {}

  const std::string& trace() const noexcept { return trace_; }

 private:
  std::string trace_;
};

}  // namespace mmsfair
