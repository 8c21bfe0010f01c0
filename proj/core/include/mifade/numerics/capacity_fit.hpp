#pragma once

#include <array>

namespace mifade::numerics {

inline constexpr int kCapacityTerms = 8;
using CapacityCoefficients = std::array<double, kCapacityTerms>;

struct CapacityFit {
  CapacityCoefficients coefficients{};
  double max_error = 0.0;  // over the fit grid
};

inline constexpr double kCapacityFitBound = 1e-7;

/// ln(1 + e^z) - max(z, 0) = ln(1 + e^{-|z|}).
double capacity_fit_target(double z);
/// sum_i a_i e^{-i |z|}.
double capacity_fit_model(const CapacityCoefficients& a, double z);

/// Minimax-leaning least-squares fit of the target over z in [-40, 40]
/// (Lawson reweighting of an ordinary least-squares start). Throws
/// ConvergenceError if the maximum error does not beat kCapacityFitBound.
CapacityFit fit_capacity_coefficients();

/// The frozen coefficients the closed forms use.
const CapacityCoefficients& capacity_coefficients();

}  // namespace mifade::numerics
