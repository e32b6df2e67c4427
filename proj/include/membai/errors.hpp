#pragma once

#include <stdexcept>
#include <string>

namespace membai {

/// Base of every error thrown by the library. `exit_code()` is what the CLI
/// returns when the error escapes a subcommand.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, int exit_code = 1)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

// bandit-core
class InvalidProblemError : public Error {
 public:
  using Error::Error;
};
class InsufficientBudgetError : public Error {
 public:
  using Error::Error;
};
class IncompleteExplorationError : public Error {
 public:
  using Error::Error;
};

// memory-model
class DomainError : public Error {
 public:
  using Error::Error;
};
class InfeasibleOperatingPointError : public Error {
 public:
  using Error::Error;
};

// design-space
class EmptyDesignSpaceError : public Error {
 public:
  explicit EmptyDesignSpaceError(const std::string& what) : Error(what, 3) {}
};

// harness
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, 2) {}
};
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, 4) {}
};

}  // namespace membai
