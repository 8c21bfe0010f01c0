#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "mifade/error.hpp"
#include "mifade/numerics/capacity_fit.hpp"
#include "mifade/numerics/generated_constants.hpp"
#include "mifade/numerics/quadrature.hpp"
#include "mifade/numerics/solver.hpp"
#include "mifade/numerics/special_functions.hpp"
#include "mifade/numerics/statistics.hpp"
#include "mifade/random.hpp"
#include "oracle_values.hpp"

using namespace mifade;
using namespace mifade::numerics;
namespace oracle = mifade::test::oracle;
using test::rel_diff;

TEST_CASE("error function anchors") {
  CHECK(numerics::erf(0.0) == 0.0);
  CHECK(numerics::erfc(0.0) == 1.0);
  CHECK(erfcx(0.0) == 1.0);
}

TEST_CASE("erfcx against arbitrary-precision values") {
  CHECK(rel_diff(erfcx(-3.0), oracle::kErfcxM3) < 1e-14);
  CHECK(rel_diff(erfcx(0.5), oracle::kErfcx0p5) < 1e-15);
  CHECK(rel_diff(erfcx(2.0), oracle::kErfcx2) < 1e-15);
  CHECK(rel_diff(erfcx(5.0), oracle::kErfcx5) < 1e-15);
  CHECK(rel_diff(erfcx(26.5), oracle::kErfcx26p5) < 1e-15);
  CHECK(rel_diff(erfcx(100.0), oracle::kErfcx100) < 1e-15);
}

TEST_CASE("erfcx defining identity") {
  for (double x : {0.5, 2.0, 5.0}) CHECK(rel_diff(erfcx(x) * std::exp(-x * x), std::erfc(x)) < 1e-14);
}

TEST_CASE("erfcx asymptotic series at 100") {
  const double x = 100.0;
  const double series = 1.0 / (x * std::sqrt(std::numbers::pi)) * (1.0 - 1.0 / (2.0 * x * x));
  CHECK(rel_diff(erfcx(x), series) < 1e-8);
}

TEST_CASE("erfcx is finite far into both tails") {
  CHECK(std::isfinite(erfcx(1e6)));
  CHECK(erfcx(1e6) > 0.0);
  CHECK(std::isfinite(erfcx(-26.0)));
}

TEST_CASE("Gaussian tail function") {
  CHECK(q_function(0.0) == 0.5);
  for (double s : {0.1, 1.0, 3.0}) {
    CHECK(std::abs(craig_q(s) - q_function(s)) < 1e-10);
    CHECK(q_function(-s) == doctest::Approx(1.0 - q_function(s)).epsilon(1e-15));
  }
}

TEST_CASE("softplus") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(800.0) == 800.0);
  CHECK(softplus(-800.0) >= 0.0);
  CHECK(rel_diff(softplus(-30.0), std::exp(-30.0)) < 1e-12);
}

TEST_CASE("Gauss-Hermite order one") {
  const auto r = gauss_hermite_rule(1);
  REQUIRE(r.order() == 1);
  CHECK(r.nodes[0] == 0.0);
  CHECK(r.weights[0] == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("Gauss-Hermite order twenty integrates even moments exactly") {
  const auto& r = shared_gauss_hermite_rule(20);
  for (int k = 0; k <= 38; k += 2) {
    const double exact = std::tgamma((k + 1) / 2.0);
    const double approx = r.integrate([k](double x) { return std::pow(x, k); });
    CHECK_MESSAGE(rel_diff(approx, exact) < 1e-10, "degree ", k);
  }
  CHECK(rel_diff(r.nodes.back(), oracle::kHermite20MaxNode) < 1e-14);
  CHECK(rel_diff(r.weights.back(), oracle::kHermite20MaxNodeWeight) < 1e-12);
  CHECK(r.nodes.front() == -r.nodes.back());
}

TEST_CASE("Gauss-Hermite weights sum to sqrt(pi)") {
  for (int n : {2, 7, 50, 500, 2000}) {
    const auto& r = shared_gauss_hermite_rule(n);
    double s = 0.0;
    for (double w : r.weights) s += w;
    CHECK_MESSAGE(std::abs(s - std::sqrt(std::numbers::pi)) < 1e-12, "order ", n);
    for (std::size_t i = 1; i < r.order(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
  CHECK_THROWS_AS(gauss_hermite_rule(0), DomainError);
  CHECK_THROWS_AS(gauss_hermite_rule(2001), DomainError);
}

TEST_CASE("rule digests match the committed constants") {
  CHECK(rule_digest(shared_gauss_hermite_rule(20)) == generated::kHermite20Digest);
  CHECK(rule_digest(shared_gauss_hermite_rule(500)) == generated::kHermite500Digest);
}

TEST_CASE("adaptive Gauss-Kronrod") {
  const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
  const auto peak = integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0);
  CHECK(rel_diff(peak.value, 2.0 / 1e-2 * std::atan(1.0 / 1e-2)) < 1e-11);
}

TEST_CASE("2x2 Newton solver") {
  const auto linear = solve_2x2_nonlinear([](const Vector2& v) { return Vector2{2 * v[0] + v[1] - 3, v[0] - v[1]}; },
                                          {10.0, -4.0});
  CHECK(linear.point[0] == doctest::Approx(1.0));
  CHECK(linear.point[1] == doctest::Approx(1.0));
  CHECK(linear.iterations <= 2);

  const auto quad = solve_2x2_nonlinear([](const Vector2& v) { return Vector2{v[0] * v[0] - 4, v[1] - 1}; }, {1.0, 1.0});
  CHECK(quad.point[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(quad.point[1] == doctest::Approx(1.0));
  CHECK(quad.residual < 1e-12);

  NewtonOptions tight;
  tight.max_iterations = 3;
  CHECK_THROWS_AS(
      solve_2x2_nonlinear([](const Vector2& v) { return Vector2{v[0] * v[0] + 1, v[1]}; }, {1.0, 1.0}, tight),
      NewtonFailure);
}

TEST_CASE("KS statistic") {
  random::Stream s(99, {});
  const std::size_t n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = s.normal();
  CHECK(ks_statistic(x, [](double t) { return normal_cdf(t); }) < 1.95 / std::sqrt(double(n)));

  const std::vector<double> constant(50, 0.3);
  const auto cdf = [](double t) { return normal_cdf(t); };
  CHECK(ks_statistic(constant, cdf) == doctest::Approx(std::max(normal_cdf(0.3), 1 - normal_cdf(0.3))));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, cdf), DomainError);
}

TEST_CASE("running moments merge in any split") {
  RunningMoments all, a, b;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::sin(i * 0.37) * 5 + i * 1e-3;
    all.add(x);
    (i < 313 ? a : b).add(x);
  }
  a.merge(b);
  CHECK(a.count == all.count);
  CHECK(a.mean == doctest::Approx(all.mean).epsilon(1e-14));
  CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  RunningMoments one;
  one.add(2.0);
  CHECK(one.variance() == 0.0);
}

TEST_CASE("capacity series coefficients") {
  const auto& a = capacity_coefficients();
  double sum = 0.0;
  for (double v : a) sum += v;
  CHECK(std::abs(sum - std::log(2.0)) < 1e-7);
  CHECK(std::abs(capacity_fit_model(a, 40.0) - capacity_fit_target(40.0)) < 1e-7);
  CHECK(std::abs(capacity_fit_model(a, -40.0) - capacity_fit_target(-40.0)) < 1e-7);
  double worst = 0.0;
  for (int i = -4000; i <= 4000; ++i) {
    const double z = i * 0.01;
    worst = std::max(worst, std::abs(capacity_fit_model(a, z) - capacity_fit_target(z)));
  }
  CHECK(worst < kCapacityFitBound);
  CHECK(worst <= generated::kCapacityFitMaxError * 1.01);
}

TEST_CASE("refitting reproduces the committed coefficients") {
  const auto fit = fit_capacity_coefficients();
  for (int i = 0; i < kCapacityTerms; ++i) CHECK(fit.coefficients[i] == generated::kCapacityCoefficients[i]);
  CHECK(fit.max_error < kCapacityFitBound);
}
