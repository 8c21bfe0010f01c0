#include "mifade/numerics/special_functions.hpp"

#include <cmath>
#include <numbers>

#include "mifade/numerics/quadrature.hpp"

namespace mifade::numerics {

namespace {

constexpr double kContinuedFractionStart = 26.0;

// exp(x^2) with the rounding error of x*x folded back in.
double exp_square(double x) {
  const double hi = x * x;
  const double lo = std::fma(x, x, -hi);
  return std::exp(hi) * (1.0 + lo);
}

// erfc(x) = exp(-x^2) / sqrt(pi) / (x + (1/2) / (x + (2/2) / (x + (3/2) / ...)))
double erfcx_continued_fraction(double x) {
  const int terms = x > 1e4 ? 4 : 60;
  double f = x;
  for (int k = terms; k >= 1; --k) f = x + 0.5 * k / f;
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

}  // namespace

double erf(double x) { return std::erf(x); }

double erfc(double x) { return std::erfc(x); }

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 * exp_square(x) - erfcx(-x);
  if (x < kContinuedFractionStart) return exp_square(x) * std::erfc(x);
  if (std::isinf(x)) return 0.0;
  return erfcx_continued_fraction(x);
}

double q_function(double s) { return 0.5 * std::erfc(s / std::numbers::sqrt2); }

double craig_q(double s) {
  if (s < 0.0) return 1.0 - craig_q(-s);
  if (s == 0.0) return 0.5;
  const double half_s2 = 0.5 * s * s;
  const auto integrand = [half_s2](double t) {
    const double sn = std::sin(t);
    if (sn == 0.0) return 0.0;
    return std::exp(-half_s2 / (sn * sn));
  };
  return integrate_adaptive(integrand, 0.0, std::numbers::pi / 2.0).value / std::numbers::pi;
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace mifade::numerics
