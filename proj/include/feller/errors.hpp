#pragma once

#include <stdexcept>
#include <string>

namespace feller {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter or model is outside its admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration failed to meet its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimated_error)
      : Error(what + " (estimated error " + std::to_string(estimated_error) + ")"),
        estimated_error_(estimated_error) {}

  double estimated_error() const noexcept { return estimated_error_; }

 private:
  double estimated_error_;
};

class SamplerError : public Error {
 public:
  using Error::Error;
};

/// Raised by the Euler engine; carries the path and step at which simulation stopped.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, long path_index, long step_index)
      : Error(what + " [path " + std::to_string(path_index) + ", step " +
              std::to_string(step_index) + "]"),
        path_index_(path_index),
        step_index_(step_index) {}

  long path_index() const noexcept { return path_index_; }
  long step_index() const noexcept { return step_index_; }

 private:
  long path_index_;
  long step_index_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace feller
