#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "mifade/circuit.hpp"
#include "mifade/error.hpp"
#include "oracle_values.hpp"

using namespace mifade;
using namespace mifade::circuit;
namespace oracle = mifade::test::oracle;
using test::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

CoilSpec transmitter() {
  CoilSpec c;
  c.radius = 0.6;
  c.turns = 200;
  c.self_resistance = 2.2619;
  c.base_self_inductance = oracle::kLoopInductanceTx;
  return c;
}

CoilSpec receiver() {
  CoilSpec c;
  c.radius = 0.2;
  c.turns = 50;
  c.self_resistance = 0.1885;
  c.base_self_inductance = oracle::kLoopInductanceRx;
  c.load_resistance = 0.1885;
  return c;
}

LinkGeometry geometry(double d = 20.0) {
  LinkGeometry g;
  g.distance = d;
  g.misalignment = identity_misalignment();
  g.receiver = receiver();
  return g;
}

}  // namespace

TEST_CASE("loop self inductance") {
  CHECK(rel_diff(loop_self_inductance(0.6, 200, 1e-3, media::kVacuumPermeability), oracle::kLoopInductanceTx) < 1e-13);
  CHECK(rel_diff(loop_self_inductance(0.2, 50, 1e-3, media::kVacuumPermeability), oracle::kLoopInductanceRx) < 1e-13);
}

TEST_CASE("single target gives the series-resonance capacitor") {
  const auto coil = transmitter();
  const double f0 = 50e3;
  const std::vector<double> targets{f0};
  const auto net = design_murec(targets, coil, Side::transmit);
  CHECK(net.branches.empty());
  const double c0 = 1.0 / (4.0 * kPi * kPi * f0 * f0 * coil.base_self_inductance);
  CHECK(rel_diff(net.series_capacitance, c0) < 1e-12);
  const auto z = coil_impedance(coil, net, f0, Side::transmit);
  CHECK(z.real() == doctest::Approx(coil.self_resistance));
  CHECK(std::abs(z.imag()) < 1e-6 * coil.self_resistance);
}

TEST_CASE("receive side adds the load to the series resistance") {
  const auto coil = receiver();
  CHECK(coil.series_resistance(Side::receive) == doctest::Approx(0.377));
  CHECK(coil.series_resistance(Side::transmit) == doctest::Approx(0.1885));
}

TEST_CASE("multi-target designs resonate at every target") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(30e3, 70e3);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> targets;
      while (static_cast<int>(targets.size()) < n) {
        const double f = u(rng);
        bool clash = false;
        for (double t : targets) clash |= std::abs(t - f) < 500.0;
        if (!clash) targets.push_back(f);
      }
      std::sort(targets.begin(), targets.end());
      for (const auto side : {Side::transmit, Side::receive}) {
        const auto coil = side == Side::transmit ? transmitter() : receiver();
        const auto net = design_murec(targets, coil, side);
        CHECK(net.branches.size() == targets.size() - 1);
        CHECK(resonance_residual(coil, net, targets, side) < 1e-6);
        const auto poles = net.pole_frequencies();
        for (std::size_t i = 0; i < poles.size(); ++i) {
          CHECK(poles[i] > targets[i]);
          CHECK(poles[i] < targets[i + 1]);
        }
        CHECK(net.series_capacitance > 0.0);
        for (const auto& b : net.branches) {
          CHECK(b.inductance > 0.0);
          CHECK(b.capacitance > 0.0);
        }
      }
    }
  }
}

TEST_CASE("two-band design re-checked by direct impedance evaluation") {
  const auto coil = transmitter();
  const std::vector<double> targets{40e3, 60e3};
  const auto net = design_murec(targets, coil, Side::transmit);
  for (double f : targets) {
    CHECK(std::abs(coil_impedance(coil, net, f, Side::transmit).imag()) < 1e-6 * coil.self_resistance);
  }
}

TEST_CASE("five-target sweep shows five minima and four poles") {
  const auto coil = transmitter();
  const std::vector<double> targets{30e3, 40e3, 50e3, 60e3, 70e3};
  const auto net = design_murec(targets, coil, Side::transmit);
  const auto sweep = impedance_sweep(coil, net, Side::transmit, 20e3, 80e3, 6001);
  const auto shape = analyze_sweep(sweep, 100.0 * coil.self_resistance);
  CHECK(shape.minima == 5);
  CHECK(shape.poles == 4);
  REQUIRE(shape.minimum_frequencies.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(shape.minimum_frequencies[i] - targets[i]) < 20.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(shape.pole_frequencies[i] > targets[i]);
    CHECK(shape.pole_frequencies[i] < targets[i + 1]);
  }
}

TEST_CASE("impedance grows without bound near a tank pole") {
  const auto coil = transmitter();
  const std::vector<double> targets{40e3, 60e3};
  const auto net = design_murec(targets, coil, Side::transmit);
  const double pole = net.pole_frequencies().front();
  const double near = std::abs(coil_impedance(coil, net, pole * (1 + 1e-6), Side::transmit));
  const double nearer = std::abs(coil_impedance(coil, net, pole * (1 + 1e-9), Side::transmit));
  CHECK(nearer > 100.0 * near);
  CHECK_THROWS_AS(coil_impedance(coil, net, pole, Side::transmit), PoleProximityError);
}

TEST_CASE("invalid target sets are rejected") {
  const auto coil = transmitter();
  CHECK_THROWS_AS(design_murec(std::vector<double>{40e3, 40e3}, coil, Side::transmit), ValidationError);
  CHECK_THROWS_AS(design_murec(std::vector<double>{60e3, 40e3}, coil, Side::transmit), ValidationError);
  CHECK_THROWS_AS(design_murec(std::vector<double>{}, coil, Side::transmit), ValidationError);
  CHECK_THROWS_AS(design_murec(std::vector<double>{-1.0}, coil, Side::transmit), ValidationError);
}

TEST_CASE("static mutual inductance") {
  const auto tx = transmitter();
  const auto m = static_mutual_inductance(geometry(), tx, media::kVacuumPermeability);
  CHECK(rel_diff(m[0][0], oracle::kStaticMutualInductance) < 1e-13);
  CHECK(m[0][0] == doctest::Approx(1.777e-8).epsilon(1e-3));
  CHECK(m[0][1] == 0.0);
  const auto m2 = static_mutual_inductance(geometry(40.0), tx, media::kVacuumPermeability);
  CHECK(rel_diff(m2[2][2], m[2][2] / 8.0) < 1e-14);
  auto g = geometry();
  g.misalignment = {};
  const auto zero = static_mutual_inductance(g, tx, media::kVacuumPermeability);
  for (const auto& row : zero) {
    for (double v : row) CHECK(v == 0.0);
  }
}

TEST_CASE("equal-gain combining of the coupling matrix") {
  const double m = oracle::kStaticMutualInductance;
  Matrix3 diag{};
  for (int i = 0; i < 3; ++i) diag[i][i] = m;
  CHECK(rel_diff(combined_coupling(diag), m) < 1e-15);
  Matrix3 all{};
  for (auto& row : all) row.fill(m);
  CHECK(rel_diff(combined_coupling(all), 3.0 * m) < 1e-15);
}

TEST_CASE("deterministic gain at resonance") {
  const auto tx = transmitter();
  const auto rx = receiver();
  const double f = 50e3;
  const std::vector<double> targets{f};
  const auto ntx = design_murec(targets, tx, Side::transmit);
  const auto nrx = design_murec(targets, rx, Side::receive);
  Matrix3 all{};
  for (auto& row : all) row.fill(oracle::kStaticMutualInductance);
  const auto ztx = coil_impedance(tx, ntx, f, Side::transmit);
  const auto zrx = coil_impedance(rx, nrx, f, Side::receive);
  const auto g = deterministic_gain_parts(f, all, ztx, zrx, *rx.load_resistance);
  const double expected = 2 * kPi * f * combined_coupling(all) * *rx.load_resistance /
                          ((rx.self_resistance + *rx.load_resistance) * tx.self_resistance);
  CHECK(rel_diff(std::exp(g.log_amplitude), expected) < 1e-6);
  CHECK(g.phase == doctest::Approx(kPi / 2).epsilon(1e-6));
  CHECK(g.log_power == doctest::Approx(2 * g.log_amplitude));
  CHECK_THROWS_AS(deterministic_gain_parts(f, Matrix3{}, ztx, zrx, 0.1885), DegenerateLinkError);
}

TEST_CASE("transmit power bound and equal split") {
  const double ra = 2.2619;
  const std::vector<std::vector<double>> one{{2.0 * ra / 3.0}};
  CHECK(transmit_power_bound(one, ra, 1) == doctest::Approx(1.0));
  const double pt = std::pow(10.0, 0.7);
  const double p = equal_split_band_power(pt, ra, 4, 8);
  CHECK(rel_diff(p, oracle::kEqualSplitPower8Bands) < 1e-14);
  const std::vector<std::vector<double>> table(4, std::vector<double>(8, p));
  CHECK(rel_diff(transmit_power_bound(table, ra, 4), pt) < 1e-14);
  const std::vector<std::vector<double>> doubled(4, std::vector<double>(8, 2 * p));
  CHECK(rel_diff(transmit_power_bound(doubled, ra, 4), 2 * pt) < 1e-14);
}

TEST_CASE("band plans") {
  const auto plan = BandPlan::equal_split({40e3, 60e3}, 1000.0, 4);
  CHECK(plan.bandwidths == std::vector<double>{500.0, 500.0});
  CHECK_NOTHROW(plan.validate());
  CHECK_THROWS_AS(BandPlan::equal_split({40e3, 40.2e3}, 1000.0, 1), ValidationError);
  CHECK_THROWS_AS(BandPlan::equal_split({60e3, 40e3}, 1000.0, 1), ValidationError);
  BandPlan manual{{40e3, 40.2e3}, {500.0, 500.0}, 1};
  CHECK_THROWS_AS(manual.validate(), ValidationError);
}
