#pragma once

#include <stdexcept>
#include <string>

namespace mrbc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
public:
  using Error::Error;
};

/// Configuration could not be loaded or failed validation.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// The time integration produced a non-finite value or crossed the blow-up ceiling.
class IntegrationFailure : public Error {
public:
  IntegrationFailure(double time, std::string field, const std::string &what)
      : Error(what), time_(time), field_(std::move(field)) {}

  double time() const { return time_; }
  const std::string &field() const { return field_; }

private:
  double time_;
  std::string field_;
};

/// A checked identity or inequality did not hold.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

} // namespace mrbc
