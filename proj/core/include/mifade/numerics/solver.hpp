#pragma once

#include <array>
#include <functional>

#include "mifade/error.hpp"

namespace mifade::numerics {

using Vector2 = std::array<double, 2>;
using Residual2 = std::function<Vector2(const Vector2&)>;

struct NewtonOptions {
  double tolerance = 1e-12;    // on the Euclidean residual norm
  int max_iterations = 100;
  double difference_step = 1e-7;  // relative central-difference step
};

struct NewtonResult {
  Vector2 point{};
  double residual = 0.0;
  int iterations = 0;
};

/// Thrown when the iteration budget runs out; carries the best point seen.
class NewtonFailure : public ConvergenceError {
 public:
  NewtonFailure(const std::string& message, NewtonResult best);
  const NewtonResult& best() const noexcept { return best_; }

 private:
  NewtonResult best_;
};

/// Damped Newton with a central-difference Jacobian. Deterministic: the same
/// residual and seed always follow the same trajectory.
NewtonResult solve_2x2_nonlinear(const Residual2& residual, Vector2 seed,
                                 const NewtonOptions& options = {});

}  // namespace mifade::numerics
