#include "mifade/numerics/capacity_fit.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "mifade/error.hpp"
#include "mifade/numerics/generated_constants.hpp"

namespace mifade::numerics {

double capacity_fit_target(double z) { return std::log1p(std::exp(-std::abs(z))); }

double capacity_fit_model(const CapacityCoefficients& a, double z) {
  const double u = std::exp(-std::abs(z));
  double acc = 0.0;
  for (int i = kCapacityTerms - 1; i >= 0; --i) acc = (acc + a[i]) * u;
  return acc;
}

CapacityFit fit_capacity_coefficients() {
  // Sample densely in both z and u = e^{-|z|} so neither end of [0, 1] is starved.
  constexpr int kPerAxis = 10001;
  constexpr double kZMax = 40.0;
  constexpr int kLawsonSweeps = 200;
  const int m = 2 * kPerAxis;
  Eigen::VectorXd u(m);
  for (int k = 0; k < kPerAxis; ++k) {
    u[k] = std::exp(-kZMax * k / (kPerAxis - 1));
    u[kPerAxis + k] = static_cast<double>(k) / (kPerAxis - 1);
  }
  Eigen::MatrixXd basis(m, kCapacityTerms);
  Eigen::VectorXd target(m);
  for (int r = 0; r < m; ++r) {
    double p = 1.0;
    for (int c = 0; c < kCapacityTerms; ++c) {
      p *= u[r];
      basis(r, c) = p;
    }
    target[r] = std::log1p(u[r]);
  }

  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0);
  CapacityFit best;
  best.max_error = INFINITY;
  for (int sweep = 0; sweep < kLawsonSweeps; ++sweep) {
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::VectorXd a =
        (sw.asDiagonal() * basis).colPivHouseholderQr().solve(sw.cwiseProduct(target));
    const Eigen::VectorXd err = basis * a - target;
    const double max_err = err.cwiseAbs().maxCoeff();
    if (max_err < best.max_error) {
      best.max_error = max_err;
      for (int c = 0; c < kCapacityTerms; ++c) best.coefficients[c] = a[c];
    }
    w = w.cwiseProduct(err.cwiseAbs());
    const double total = w.sum();
    if (!(total > 0.0)) break;
    w /= total;
  }
  if (!(best.max_error < kCapacityFitBound)) {
    throw ConvergenceError(fmt::format("capacity coefficient fit error {} exceeds {}", best.max_error,
                                       kCapacityFitBound),
                           kLawsonSweeps, best.max_error);
  }
  return best;
}

const CapacityCoefficients& capacity_coefficients() { return generated::kCapacityCoefficients; }

}  // namespace mifade::numerics
