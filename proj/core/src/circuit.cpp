#include "mifade/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "mifade/error.hpp"

namespace mifade::circuit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleGuard = 1e-12;

void require_frequency(double frequency) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw DomainError(fmt::format("frequency must be positive, got {}", frequency));
  }
}

double tank_reactance(const ResonatorBranch& b, double omega) {
  return omega * b.inductance / (1.0 - omega * omega * b.inductance * b.capacitance);
}

}  // namespace

void CoilSpec::validate(Side side) const {
  if (!(radius > 0.0)) throw ValidationError("coil radius must be > 0");
  if (turns < 1) throw ValidationError("coil turns must be >= 1");
  if (!(self_resistance > 0.0)) throw ValidationError("coil self resistance must be > 0");
  if (!(base_self_inductance > 0.0)) throw ValidationError("coil self inductance must be > 0");
  if (side == Side::receive && !(load_resistance.value_or(0.0) > 0.0)) {
    throw ValidationError("receive coil needs a positive load resistance");
  }
}

double CoilSpec::series_resistance(Side side) const {
  return side == Side::receive ? self_resistance + load_resistance.value_or(0.0) : self_resistance;
}

double loop_self_inductance(double radius, int turns, double wire_radius, double permeability) {
  if (!(radius > 0.0) || !(wire_radius > 0.0) || turns < 1) {
    throw DomainError("loop inductance needs positive radius, wire radius and turns");
  }
  const double log_term = std::log(8.0 * radius / wire_radius) - 2.0;
  if (!(log_term > 0.0)) throw DomainError("wire radius too large for the loop inductance estimate");
  return permeability * static_cast<double>(turns) * static_cast<double>(turns) * radius * log_term;
}

double ResonatorBranch::pole_frequency() const {
  return 1.0 / (kTwoPi * std::sqrt(inductance * capacitance));
}

void MurecNetwork::validate() const {
  if (!(series_capacitance > 0.0)) throw ValidationError("series capacitance must be > 0");
  for (const auto& b : branches) {
    if (!(b.inductance > 0.0) || !(b.capacitance > 0.0)) {
      throw ValidationError("branch inductance and capacitance must be > 0");
    }
  }
}

std::vector<double> MurecNetwork::pole_frequencies() const {
  std::vector<double> poles;
  poles.reserve(branches.size());
  for (const auto& b : branches) poles.push_back(b.pole_frequency());
  return poles;
}

void BandPlan::validate() const {
  if (centers.empty()) throw ValidationError("band plan needs at least one band");
  if (centers.size() != bandwidths.size()) {
    throw ValidationError("band plan: centers and bandwidths differ in length");
  }
  if (num_users < 1) throw ValidationError("band plan: num_users must be >= 1");
  for (std::size_t n = 0; n < centers.size(); ++n) {
    if (!(centers[n] > 0.0) || !(bandwidths[n] > 0.0)) {
      throw ValidationError(fmt::format("band {}: center and bandwidth must be > 0", n));
    }
    if (!(centers[n] - bandwidths[n] / 2.0 > 0.0)) {
      throw ValidationError(fmt::format("band {} extends below 0 Hz", n));
    }
    if (n > 0 && !(centers[n - 1] + bandwidths[n - 1] / 2.0 < centers[n] - bandwidths[n] / 2.0)) {
      throw ValidationError(fmt::format("bands {} and {} overlap or are not ascending", n - 1, n));
    }
  }
}

BandPlan BandPlan::equal_split(std::vector<double> centers, double total_bandwidth, int num_users) {
  BandPlan plan;
  const auto n = centers.size();
  plan.bandwidths.assign(n, n == 0 ? 0.0 : total_bandwidth / static_cast<double>(n));
  plan.centers = std::move(centers);
  plan.num_users = num_users;
  plan.validate();
  return plan;
}

void LinkGeometry::validate() const {
  if (!(distance > 0.0)) throw ValidationError("link distance must be > 0");
  for (const auto& row : misalignment) {
    for (double j : row) {
      if (!(std::abs(j) <= 1.0)) throw ValidationError("misalignment factors must satisfy |J| <= 1");
    }
  }
  receiver.validate(Side::receive);
}

Matrix3 identity_misalignment() {
  Matrix3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1.0;
  return m;
}

double reactance(const CoilSpec& coil, const MurecNetwork& network, double frequency) {
  const double omega = kTwoPi * frequency;
  const double l0 = coil.base_self_inductance;
  const double c0 = network.series_capacitance;
  double x = (omega * omega * l0 * c0 - 1.0) / (omega * c0);
  for (const auto& b : network.branches) x += tank_reactance(b, omega);
  return x;
}

std::complex<double> coil_impedance(const CoilSpec& coil, const MurecNetwork& network,
                                    double frequency, Side side) {
  require_frequency(frequency);
  for (const auto& b : network.branches) {
    const double pole = b.pole_frequency();
    if (std::abs(frequency - pole) <= kPoleGuard * pole) throw PoleProximityError(frequency, pole);
  }
  return {coil.series_resistance(side), reactance(coil, network, frequency)};
}

double resonance_residual(const CoilSpec& coil, const MurecNetwork& network,
                          std::span<const double> targets, Side side) {
  const double r = coil.series_resistance(side);
  double worst = 0.0;
  for (double f : targets) worst = std::max(worst, std::abs(reactance(coil, network, f)) / r);
  return worst;
}

MurecNetwork design_murec(std::span<const double> targets, const CoilSpec& coil, Side side,
                          const DesignOptions& options) {
  if (targets.empty()) throw ValidationError("design_murec needs at least one target frequency");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!(targets[i] > 0.0) || !std::isfinite(targets[i])) {
      throw ValidationError(fmt::format("target {} must be a positive frequency", i));
    }
    if (i > 0 && !(targets[i] > targets[i - 1])) {
      throw ValidationError(
          fmt::format("targets must be strictly ascending ({} Hz then {} Hz)", targets[i - 1], targets[i]));
    }
  }
  if (!(coil.base_self_inductance > 0.0)) throw ValidationError("coil self inductance must be > 0");

  const std::size_t num_branches = targets.size() - 1;
  const double l0 = coil.base_self_inductance;

  std::vector<double> w2(targets.size());  // resonance omega^2
  for (std::size_t m = 0; m < targets.size(); ++m) w2[m] = std::pow(kTwoPi * targets[m], 2);
  std::vector<double> p2(num_branches);  // pole omega^2 at geometric means
  for (std::size_t n = 0; n < num_branches; ++n) p2[n] = std::sqrt(w2[n] * w2[n + 1]);

  // Foster expansion seed. Products are formed as ratios term by term to stay in range.
  double inv_c0 = l0;
  for (std::size_t m = 0; m < targets.size(); ++m) {
    inv_c0 *= w2[m];
    if (m < num_branches) inv_c0 /= p2[m];
  }
  Eigen::VectorXd unknowns(static_cast<Eigen::Index>(targets.size()));
  unknowns[0] = inv_c0;
  for (std::size_t n = 0; n < num_branches; ++n) {
    // L_n = -L0 prod_m (P_n^2 - w_m^2) / (P_n^4 prod_{j != n} (P_n^2 - P_j^2))
    double value = -l0 / (p2[n] * p2[n]);
    for (std::size_t m = 0; m < targets.size(); ++m) {
      value *= (p2[n] - w2[m]);
      if (m < num_branches && m != n) value /= (p2[n] - p2[m]);
    }
    unknowns[static_cast<Eigen::Index>(n + 1)] = value;
  }

  auto assemble = [&](const Eigen::VectorXd& u) {
    MurecNetwork net;
    net.series_capacitance = 1.0 / u[0];
    net.branches.resize(num_branches);
    for (std::size_t n = 0; n < num_branches; ++n) {
      const double ln = u[static_cast<Eigen::Index>(n + 1)];
      net.branches[n] = {ln, 1.0 / (p2[n] * ln)};
    }
    return net;
  };

  const auto dim = static_cast<Eigen::Index>(targets.size());
  Eigen::MatrixXd jacobian(dim, dim);
  Eigen::VectorXd residual(dim);

  MurecNetwork network = assemble(unknowns);
  double worst = resonance_residual(coil, network, targets, side);
  int iteration = 0;
  // Newton on the resonance conditions; the unknowns enter linearly so this
  // mostly cleans up rounding in the seed.
  while (worst >= options.residual_tolerance * 1e-3 && iteration < options.max_iterations) {
    ++iteration;
    for (Eigen::Index m = 0; m < dim; ++m) {
      const double omega = std::sqrt(w2[static_cast<std::size_t>(m)]);
      residual[m] = reactance(coil, network, targets[static_cast<std::size_t>(m)]);
      jacobian(m, 0) = -1.0 / omega;
      for (std::size_t n = 0; n < num_branches; ++n) {
        jacobian(m, static_cast<Eigen::Index>(n + 1)) = omega / (1.0 - w2[static_cast<std::size_t>(m)] / p2[n]);
      }
    }
    const Eigen::VectorXd step = jacobian.colPivHouseholderQr().solve(residual);
    double damping = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving) {
      Eigen::VectorXd trial = unknowns - damping * step;
      if ((trial.array() > 0.0).all()) {
        const MurecNetwork candidate = assemble(trial);
        const double trial_worst = resonance_residual(coil, candidate, targets, side);
        if (trial_worst < worst) {
          unknowns = trial;
          network = candidate;
          worst = trial_worst;
          improved = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!improved) break;
  }
  if (!(worst < options.residual_tolerance) || !(unknowns.array() > 0.0).all()) {
    throw ConvergenceError(
        fmt::format("MuReC synthesis for {} targets did not reach |Im Z| < {:.1e} R", targets.size(),
                    options.residual_tolerance),
        iteration, worst);
  }
  return network;
}

std::vector<ImpedancePoint> impedance_sweep(const CoilSpec& coil, const MurecNetwork& network,
                                            Side side, double f_start, double f_stop, int points) {
  if (!(f_start > 0.0) || !(f_stop > f_start) || points < 2) {
    throw DomainError("impedance sweep needs 0 < f_start < f_stop and at least 2 points");
  }
  std::vector<ImpedancePoint> sweep;
  sweep.reserve(static_cast<std::size_t>(points));
  const double step = (f_stop - f_start) / static_cast<double>(points - 1);
  for (int i = 0; i < points; ++i) {
    const double f = f_start + step * static_cast<double>(i);
    try {
      sweep.push_back({f, coil_impedance(coil, network, f, side)});
    } catch (const PoleProximityError&) {
      // exactly on a pole: no finite sample to report
    }
  }
  return sweep;
}

SweepShape analyze_sweep(std::span<const ImpedancePoint> sweep, double pole_threshold) {
  SweepShape shape;
  for (std::size_t i = 1; i + 1 < sweep.size(); ++i) {
    const double prev = std::abs(sweep[i - 1].impedance);
    const double cur = std::abs(sweep[i].impedance);
    const double next = std::abs(sweep[i + 1].impedance);
    if (cur < prev && cur <= next) {
      ++shape.minima;
      shape.minimum_frequencies.push_back(sweep[i].frequency);
    }
    if (cur > prev && cur >= next && cur > pole_threshold) {
      ++shape.poles;
      shape.pole_frequencies.push_back(sweep[i].frequency);
    }
  }
  return shape;
}

Matrix3 static_mutual_inductance(const LinkGeometry& geometry, const CoilSpec& tx_coil,
                                 double permeability) {
  if (!(geometry.distance > 0.0)) throw DomainError("link distance must be > 0");
  const double at2 = tx_coil.radius * tx_coil.radius;
  const double ar2 = geometry.receiver.radius * geometry.receiver.radius;
  const double scale = permeability * std::numbers::pi * tx_coil.turns * geometry.receiver.turns *
                       at2 * ar2 / (4.0 * std::pow(geometry.distance, 3));
  Matrix3 m{};
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) m[p][q] = scale * geometry.misalignment[p][q];
  }
  return m;
}

double combined_coupling(const Matrix3& mbar) {
  double sum = 0.0;
  for (const auto& row : mbar) {
    for (double v : row) sum += v;
  }
  return sum / 3.0;
}

DeterministicGain deterministic_gain_parts(double frequency, const Matrix3& mbar,
                                           std::complex<double> z_tx, std::complex<double> z_rx,
                                           double load_resistance) {
  require_frequency(frequency);
  const double coupling = combined_coupling(mbar);
  if (coupling == 0.0 || !(load_resistance > 0.0)) {
    throw DegenerateLinkError("zero combined coupling or load: channel log-gain is -infinity");
  }
  if (z_tx == 0.0 || z_rx == 0.0) throw DegenerateLinkError("coil impedance vanishes");
  const std::complex<double> numerator{0.0, kTwoPi * frequency * load_resistance * coupling};
  DeterministicGain gain;
  gain.log_amplitude = std::log(std::abs(numerator)) - std::log(std::abs(z_rx)) - std::log(std::abs(z_tx));
  gain.phase = std::arg(numerator / (z_rx * z_tx));
  gain.log_power = 2.0 * gain.log_amplitude;
  return gain;
}

double transmit_power_bound(std::span<const std::vector<double>> band_powers, double tx_resistance,
                            int num_users) {
  if (!(tx_resistance > 0.0) || num_users < 1) {
    throw DomainError("power bound needs R_a > 0 and at least one user");
  }
  double total = 0.0;
  for (const auto& row : band_powers) {
    for (double p : row) total += p;
  }
  return 3.0 / (2.0 * tx_resistance * static_cast<double>(num_users)) * total;
}

double equal_split_band_power(double transmit_power, double tx_resistance, int num_users,
                              int num_bands) {
  if (!(transmit_power > 0.0) || !(tx_resistance > 0.0) || num_users < 1 || num_bands < 1) {
    throw DomainError("equal split needs positive power, resistance, users and bands");
  }
  const double users = static_cast<double>(num_users);
  return transmit_power * 2.0 * tx_resistance * users / (3.0 * users * static_cast<double>(num_bands));
}

}  // namespace mifade::circuit
