#include "mifade/error.hpp"

#include <fmt/format.h>

namespace mifade {

PoleProximityError::PoleProximityError(double frequency, double pole)
    : DomainError(fmt::format("frequency {} Hz is within 1e-12 relative of the pole at {} Hz",
                              frequency, pole)),
      frequency_(frequency),
      pole_(pole) {}

ConfigError::ConfigError(std::string path, const std::string& message)
    : Error(path.empty() ? message : fmt::format("{}: {}", path, message)), path_(std::move(path)) {}

ConvergenceError::ConvergenceError(const std::string& message, int iterations, double residual)
    : Error(fmt::format("{} (iterations={}, residual={:.3e})", message, iterations, residual)),
      iterations_(iterations),
      residual_(residual) {}

}  // namespace mifade
