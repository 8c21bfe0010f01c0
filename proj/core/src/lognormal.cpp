#include "mifade/lognormal.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mifade/error.hpp"

namespace mifade {

double LognormalParams::mean() const { return std::exp(mu + 0.5 * sigma2); }

double LognormalParams::variance() const {
  return std::expm1(sigma2) * std::exp(2.0 * mu + sigma2);
}

double LognormalParams::median() const { return std::exp(mu); }

double LognormalParams::pdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (degenerate()) return x == median() ? INFINITY : 0.0;
  const double z = std::log(x) - mu;
  return std::exp(-z * z / (2.0 * sigma2)) / (x * std::sqrt(2.0 * std::numbers::pi * sigma2));
}

double LognormalParams::cdf(double x) const {
  if (!(x > 0.0)) return 0.0;
  const double t = std::log(x) - mu;
  if (degenerate()) return t < 0.0 ? 0.0 : (t > 0.0 ? 1.0 : 0.5);
  // erfc keeps full relative accuracy in the lower tail
  return 0.5 * std::erfc(-t / std::sqrt(2.0 * sigma2));
}

void LognormalParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma2) || sigma2 < 0.0) {
    throw DomainError(fmt::format("invalid lognormal parameters (mu={}, sigma2={})", mu, sigma2));
  }
}

}  // namespace mifade
