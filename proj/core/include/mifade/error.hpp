#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace mifade {

/// Root of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Impedance evaluated too close to a parallel-LC pole.
class PoleProximityError : public DomainError {
 public:
  PoleProximityError(double frequency, double pole);
  double frequency() const noexcept { return frequency_; }
  double pole() const noexcept { return pole_; }

 private:
  double frequency_;
  double pole_;
};

/// Zero end-to-end coupling, so the log-gain is minus infinity.
class DegenerateLinkError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration. `path` is a JSON-pointer-like location ("/links/0/distance").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A value violates a model invariant (overlapping bands, unordered targets, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Random-variate generation gave up (e.g. truncated-normal rejection budget exhausted).
class SamplingError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, int iterations, double residual);
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace mifade
