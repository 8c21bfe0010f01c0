#include "mifade/numerics/solver.hpp"

#include <cmath>

#include <fmt/format.h>

namespace mifade::numerics {

namespace {

double norm(const Vector2& r) { return std::hypot(r[0], r[1]); }

}  // namespace

NewtonFailure::NewtonFailure(const std::string& message, NewtonResult best)
    : ConvergenceError(message, best.iterations, best.residual), best_(best) {}

NewtonResult solve_2x2_nonlinear(const Residual2& residual, Vector2 seed, const NewtonOptions& options) {
  NewtonResult current{seed, 0.0, 0};
  Vector2 r = residual(seed);
  current.residual = norm(r);
  NewtonResult best = current;
  if (!std::isfinite(current.residual)) {
    throw NewtonFailure("residual is not finite at the seed", best);
  }

  while (current.residual >= options.tolerance) {
    if (current.iterations >= options.max_iterations) {
      throw NewtonFailure(fmt::format("Newton solver did not converge in {} iterations (residual {})",
                                      options.max_iterations, best.residual),
                          best);
    }
    const Vector2& x = current.point;
    double jac[2][2];
    for (int j = 0; j < 2; ++j) {
      const double h = options.difference_step * std::max(1.0, std::abs(x[j]));
      Vector2 xp = x;
      Vector2 xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Vector2 rp = residual(xp);
      const Vector2 rm = residual(xm);
      for (int i = 0; i < 2; ++i) jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
    }
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (det == 0.0 || !std::isfinite(det)) {
      throw NewtonFailure("singular Jacobian", best);
    }
    const Vector2 step{(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
                       (jac[0][0] * r[1] - jac[1][0] * r[0]) / det};

    double lambda = 1.0;
    Vector2 trial{};
    Vector2 r_trial{};
    double n_trial = INFINITY;
    for (int halving = 0; halving < 40; ++halving) {
      trial = {x[0] - lambda * step[0], x[1] - lambda * step[1]};
      r_trial = residual(trial);
      n_trial = norm(r_trial);
      if (std::isfinite(n_trial) && n_trial < current.residual) break;
      lambda *= 0.5;
    }
    ++current.iterations;
    if (!(n_trial < current.residual)) {
      best.iterations = current.iterations;
      throw NewtonFailure(fmt::format("line search stalled at residual {}", best.residual), best);
    }
    current.point = trial;
    current.residual = n_trial;
    r = r_trial;
    best = current;
  }
  return current;
}

}  // namespace mifade::numerics
