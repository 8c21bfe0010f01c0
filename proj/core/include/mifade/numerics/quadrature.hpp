#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mifade::numerics {

inline constexpr int kDefaultHermiteOrder = 500;
inline constexpr int kMaxHermiteOrder = 2000;

/// Gauss-Hermite rule for the weight exp(-x^2), nodes ascending.
/// Outer weights of large rules underflow to zero in double; `log_weights`
/// keeps them exactly.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;

  std::size_t order() const { return nodes.size(); }
  /// sum w_i g(x_i), the approximation to int g(x) exp(-x^2) dx.
  double integrate(const std::function<double(double)>& g) const;
};

/// Golub-Welsch eigenvalues polished by Newton on the scaled orthonormal
/// Hermite recurrence. Throws DomainError for orders outside [1, 2000] and
/// ConvergenceError if the polish stalls.
QuadratureRule gauss_hermite_rule(int order);

/// Process-wide cached rule; computed once per order and shared read-only.
const QuadratureRule& shared_gauss_hermite_rule(int order = kDefaultHermiteOrder);

/// FNV-1a 64 digest of the nodes and log-weights printed to 12 significant
/// digits; stable across platforms that agree to that precision.
std::uint64_t rule_digest(const QuadratureRule& rule);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (61 point) integration on a finite interval.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double tolerance = 1e-13, unsigned max_depth = 20);

}  // namespace mifade::numerics
