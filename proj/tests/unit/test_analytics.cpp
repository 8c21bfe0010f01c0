#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "mifade/analytics.hpp"
#include "mifade/error.hpp"
#include "mifade/numerics/quadrature.hpp"
#include "mifade/numerics/special_functions.hpp"
#include "mifade/numerics/statistics.hpp"
#include "mifade/random.hpp"
#include "oracle_values.hpp"

using namespace mifade;
using namespace mifade::analytics;
namespace oracle = mifade::test::oracle;
using test::rel_diff;

namespace {

const numerics::QuadratureRule& rule() { return numerics::shared_gauss_hermite_rule(500); }
const ModulationScheme& bpsk() { return find_modulation("bpsk"); }

LinkBudget unit_budget(std::size_t bands = 1) {
  LinkBudget b;
  b.noise_density = 1.0;
  b.band_powers.assign(bands, 1.0);
  b.bandwidths.assign(bands, 1.0);
  b.base_power = 1.0;
  b.base_bandwidth = 1.0;
  return b;
}

}  // namespace

TEST_CASE("lognormal accessors") {
  const LognormalParams p{0.3, 0.8};
  CHECK(p.mean() == doctest::Approx(std::exp(0.3 + 0.4)));
  CHECK(p.variance() == doctest::Approx((std::exp(0.8) - 1) * std::exp(0.6 + 0.8)));
  CHECK(p.median() == doctest::Approx(std::exp(0.3)));
  CHECK(p.cdf(std::exp(0.3)) == doctest::Approx(0.5));
  CHECK_THROWS_AS((LognormalParams{0.0, -1.0}.validate()), DomainError);

  random::Stream s(8, {});
  numerics::RunningMoments m;
  for (int i = 0; i < 1000000; ++i) m.add(std::exp(0.3 + std::sqrt(0.8) * s.normal()));
  CHECK(rel_diff(m.mean, p.mean()) < 0.01);
}

TEST_CASE("multiplexing SNR law") {
  const LognormalParams pow{-2.0, 0.7};
  auto b = unit_budget(2);
  const auto snr0 = snr_params_multiplexing(pow, b, 0);
  CHECK(snr0.params.mu == pow.mu);
  CHECK(snr0.params.sigma2 == pow.sigma2);
  b.band_powers[1] = 10.0;
  b.bandwidths[1] = 2.0;
  b.noise_density = 0.5;
  const auto snr1 = snr_params_multiplexing(pow, b, 1);
  CHECK(snr1.params.mu == doctest::Approx(pow.mu + std::log(10.0 / (0.5 * 2.0))));
  CHECK(snr1.band == 1);
}

TEST_CASE("capacity against arbitrary-precision quadrature") {
  const double b = 1000.0;
  CHECK(std::abs(ergodic_capacity({0.0, 1.0}, b) - b * oracle::kCapacityA) < 1e-6 * b);
  CHECK(std::abs(ergodic_capacity({5.0, 4.0}, b) - b * oracle::kCapacityB) < 1e-6 * b);
  CHECK(std::abs(ergodic_capacity({-3.0, 0.5}, b) - b * oracle::kCapacityC) < 1e-6 * b);
  CHECK(std::abs(ergodic_capacity({10.0, 16.0}, b) - b * oracle::kCapacityD) < 1e-6 * b);
  CHECK(std::abs(ergodic_capacity({-5.0, 0.1}, b) - b * oracle::kCapacityE) < 1e-6 * b);
  CHECK(std::abs(ergodic_capacity_quadrature({0.0, 1.0}, b, rule()) - b * oracle::kCapacityA) < 1e-9 * b);
}

TEST_CASE("capacity closed form vs Gauss-Hermite over the grid") {
  double worst = 0.0;
  for (double e = -5.0; e <= 20.0; e += 0.5) {
    for (double d : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      worst = std::max(worst, std::abs(ergodic_capacity({e, d}, 1.0) - ergodic_capacity_quadrature({e, d}, 1.0, rule())));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("capacity degenerate and edge cases") {
  CHECK(rel_diff(ergodic_capacity({20.0, 0.0}, 3.0), 3.0 * 20.0) < 1e-6);
  CHECK(ergodic_capacity({1.0, 0.0}, 2.0) == doctest::Approx(2.0 * std::log1p(std::exp(1.0))));
  CHECK(ergodic_capacity({1.0, 2.0}, 0.0) == 0.0);
  CHECK(rel_diff(ergodic_capacity({20.0, 1e-12}, 1.0), 20.0) < 1e-6);
  double prev = 0.0;
  for (double e = -10.0; e <= 30.0; e += 0.25) {
    const double c = ergodic_capacity({e, 2.0}, 1.0);
    CHECK(c > prev);
    prev = c;
  }
  CHECK(std::isfinite(ergodic_capacity({-700.0, 1.0}, 1.0)));
  CHECK(std::isfinite(ergodic_capacity({700.0, 1e-6}, 1.0)));
  CHECK(std::isfinite(ergodic_capacity({3.0, 1e4}, 1.0)));
}

TEST_CASE("lognormal MGF") {
  CHECK(rel_diff(lognormal_mgf({0.0, 1.0}, 0.5, rule()), oracle::kMgf_0_1_s0p5) < 1e-12);
  CHECK(rel_diff(lognormal_mgf({0.0, 1.0}, 2.0, rule()), oracle::kMgf_0_1_s2) < 1e-12);
  CHECK(rel_diff(lognormal_mgf({1.0, 4.0}, 0.1, rule()), oracle::kMgf_1_4_s0p1) < 1e-10);
  CHECK(std::abs(lognormal_mgf({2.0, 3.0}, 0.0, rule()) - 1.0) < 1e-12);
  CHECK(lognormal_mgf({0.7, 0.0}, 1.3, rule()) == std::exp(-1.3 * std::exp(0.7)));
  double prev = 2.0;
  for (double s = 0.0; s < 5.0; s += 0.25) {
    const double m = lognormal_mgf({0.0, 1.0}, s, rule());
    CHECK(m < prev);
    prev = m;
  }
  CHECK_THROWS_AS(lognormal_mgf({0.0, 1.0}, -1.0, rule()), DomainError);
}

TEST_CASE("average BER against arbitrary-precision quadrature") {
  struct Case {
    double e, d, expected;
  };
  const Case cases[] = {
      {-2, 0.1, oracle::kBerBpsk_M2_0p1}, {-2, 1, oracle::kBerBpsk_M2_1}, {-2, 4, oracle::kBerBpsk_M2_4},
      {2, 0.1, oracle::kBerBpsk_2_0p1},   {2, 1, oracle::kBerBpsk_2_1},   {2, 4, oracle::kBerBpsk_2_4},
      {6, 0.1, oracle::kBerBpsk_6_0p1},   {6, 1, oracle::kBerBpsk_6_1},   {6, 4, oracle::kBerBpsk_6_4},
  };
  for (const auto& c : cases) {
    const double ber = average_ber({c.e, c.d}, bpsk(), rule());
    CHECK_MESSAGE(std::abs(ber - c.expected) < 1e-9, "E ", c.e, " D ", c.d);
  }
  CHECK(std::abs(average_ber({2.0, 1.0}, find_modulation("4pam"), rule()) - oracle::kBer4Pam_2_1) < 1e-9);
}

TEST_CASE("average BER limits") {
  for (double e : {-3.0, 0.0, 2.0, 4.0}) {
    CHECK(std::abs(average_ber({e, 0.0}, bpsk(), rule()) - numerics::q_function(std::sqrt(2 * std::exp(e)))) < 1e-8);
  }
  CHECK(average_ber({-60.0, 1.0}, bpsk(), rule()) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(find_modulation("qpsk").beta == 2.0);
  CHECK_THROWS_AS(find_modulation("256qam"), ConfigError);
}

TEST_CASE("outage") {
  const LognormalParams p{1.5, 0.9};
  CHECK(outage(p, std::exp(1.5)) == 0.5);
  CHECK(outage(p, 1e-300) < 1e-12);
  CHECK(outage(p, 1e300) == 1.0);
  CHECK(outage({1.5, 0.0}, std::exp(1.5)) == 0.5);
  CHECK(outage({1.5, 0.0}, 1.0) == 0.0);
  CHECK(outage({1.5, 0.0}, 100.0) == 1.0);

  random::Stream s(31, {});
  const int n = 1000000;
  std::vector<double> g(n);
  for (auto& x : g) x = std::exp(p.mu + std::sqrt(p.sigma2) * s.normal());
  for (double th : {1.0, 3.0, std::exp(1.5), 10.0, 30.0}) {
    double below = 0.0;
    for (double x : g) below += x < th;
    const double po = outage(p, th);
    CHECK(std::abs(below / n - po) < 3.0 * std::sqrt(po * (1 - po) / n));
  }
}

TEST_CASE("Fenton-Wilkinson") {
  const std::vector<LognormalParams> two{{0.0, 1.0}, {0.0, 1.0}};
  const auto fw = fenton_wilkinson(two);
  CHECK(std::exp(fw.mu + fw.sigma2 / 2) == doctest::Approx(2 * std::exp(0.5)));
  const std::vector<LognormalParams> flat{{0.3, 0.0}, {0.3, 0.0}, {0.3, 0.0}};
  CHECK(fenton_wilkinson(flat).sigma2 == 0.0);
  CHECK(fenton_wilkinson(flat).mu == doctest::Approx(0.3 + std::log(3.0)));
}

TEST_CASE("MGF matching") {
  const std::vector<LognormalParams> two{{0.0, 1.0}, {0.0, 1.0}};
  const auto m = mgf_match_lognormal_sum(two, rule());
  CHECK(m.residual < 1e-10);
  CHECK_FALSE(m.degraded);
  CHECK(std::abs(m.params.mu - oracle::kMgfMatch2Mu) < 1e-9);
  CHECK(std::abs(m.params.sigma2 - oracle::kMgfMatch2Sigma2) < 1e-9);
  for (std::size_t j = 0; j < 2; ++j) {
    const double lhs = lognormal_mgf(m.params, m.probes[j], rule());
    const double rhs = std::pow(lognormal_mgf(two[0], m.probes[j], rule()), 2);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }

  const std::vector<LognormalParams> single{{0.4, 2.0}};
  const auto s = mgf_match_lognormal_sum(single, rule());
  CHECK(std::abs(s.params.mu - 0.4) < 1e-9);
  CHECK(std::abs(s.params.sigma2 - 2.0) < 1e-9);

  const std::vector<LognormalParams> flat{{0.1, 0.0}, {0.1, 0.0}, {0.1, 0.0}, {0.1, 0.0}};
  const auto f = mgf_match_lognormal_sum(flat, rule());
  CHECK(f.params.mu == doctest::Approx(0.1 + std::log(4.0)));
  CHECK(f.params.sigma2 == 0.0);

  CHECK_THROWS(mgf_match_lognormal_sum(std::vector<LognormalParams>{}, rule()));
}

TEST_CASE("MGF matching falls back and reports it") {
  const std::vector<LognormalParams> two{{0.0, 1.0}, {0.0, 1.0}};
  MgfMatchOptions starved;
  starved.newton.max_iterations = 1;
  starved.newton.tolerance = 1e-300;
  try {
    mgf_match_lognormal_sum(two, rule(), starved);
    FAIL("expected MgfMatchError");
  } catch (const MgfMatchError& e) {
    CHECK(e.fallback().degraded);
    CHECK(e.fallback().params.mu == doctest::Approx(fenton_wilkinson(two).mu));
  }
  CHECK(mgf_match_or_fallback(two, rule(), starved).degraded);
}

TEST_CASE("diversity SNR law") {
  const LognormalParams lambda{1.2, 0.4};
  const auto snr = snr_params_diversity(lambda, unit_budget());
  CHECK(snr.params.mu == lambda.mu);
  CHECK(snr.band == kCombinedBand);
  CHECK(snr.mode == AnalysisMode::diversity);

  const LognormalParams pow{0.5, 0.3};
  const auto one = mgf_match_or_fallback(std::vector<LognormalParams>{pow}, rule());
  const auto div = snr_params_diversity(one.params, unit_budget());
  const auto mux = snr_params_multiplexing(pow, unit_budget(), 0);
  CHECK(std::abs(div.params.mu - mux.params.mu) < 1e-9);
  CHECK(std::abs(div.params.sigma2 - mux.params.sigma2) < 1e-9);

  const auto two = mgf_match_or_fallback(std::vector<LognormalParams>{pow, pow}, rule());
  CHECK(two.params.mu > one.params.mu);
}

TEST_CASE("diversity law moments against sampled sums") {
  const std::vector<LognormalParams> addends{{0.0, 1.0}, {0.5, 0.5}, {-0.3, 2.0}};
  const auto m = mgf_match_lognormal_sum(addends, rule());
  random::Stream s(12, {});
  numerics::RunningMoments sum;
  for (int i = 0; i < 1000000; ++i) {
    double x = 0.0;
    for (const auto& a : addends) x += std::exp(a.mu + std::sqrt(a.sigma2) * s.normal());
    sum.add(x);
  }
  CHECK(rel_diff(m.params.mean(), sum.mean) < 0.05);
}

TEST_CASE("network aggregates") {
  std::vector<MetricsRow> rows;
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t n = 0; n < 2; ++n) rows.push_back({k, n, {0.0, 1.0}, 1.0, 10.0 + n, 0.01 * (n + 1), 0.5});
  }
  const auto r = network_multiplexing(rows, 4, 2, "bpsk", 1.0);
  CHECK(r.network_capacity == doctest::Approx(21.0));
  CHECK(r.network_ber == doctest::Approx(0.015));
  CHECK(r.network_outage == doctest::Approx(std::pow(0.5, 8)));

  const SnrDistribution snr{{1.0, 0.5}, 0, AnalysisMode::multiplexing};
  const auto row = evaluate_metrics(0, snr, 2.0, bpsk(), 3.0, rule());
  const auto single = network_multiplexing({row}, 1, 1, "bpsk", 3.0);
  CHECK(single.network_capacity == row.capacity);
  CHECK(single.network_ber == row.ber);
  CHECK(single.network_outage == row.outage);
  CHECK_THROWS(network_multiplexing({row}, 2, 1, "bpsk", 3.0));
}

TEST_CASE("single band single user diversity report equals multiplexing") {
  const SnrDistribution snr{{1.0, 0.5}, 0, AnalysisMode::multiplexing};
  const auto mux = network_multiplexing({evaluate_metrics(0, snr, 2.0, bpsk(), 3.0, rule())}, 1, 1, "bpsk", 3.0);
  const std::vector<SnrDistribution> users{{{1.0, 0.5}, kCombinedBand, AnalysisMode::diversity}};
  const auto div = diversity_report(users, 2.0, bpsk(), 3.0, 1, rule());
  CHECK(rel_diff(div.network_capacity, mux.network_capacity) < 1e-12);
  CHECK(rel_diff(div.network_ber, mux.network_ber) < 1e-12);
  CHECK(rel_diff(div.network_outage, mux.network_outage) < 1e-12);
}

TEST_CASE("mode names round trip") {
  CHECK(parse_analysis_mode("diversity") == AnalysisMode::diversity);
  CHECK(to_string(AnalysisMode::multiplexing) == "multiplexing");
  CHECK_THROWS_AS(parse_analysis_mode("combining"), ConfigError);
}
