#pragma once

#include <stdexcept>
#include <string>

namespace lpinn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched batch lengths or array shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The Lagrangian map stopped being one-to-one (dx/dx0 too small or a
/// moving grid that is not monotone).
class CharacteristicCrossing : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss or gradient during optimization.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& what, long iteration)
      : Error(what), iteration_(iteration) {}
  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

/// The spectral reference solver lost resolution or blew up.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration, checkpoint or data file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpinn
