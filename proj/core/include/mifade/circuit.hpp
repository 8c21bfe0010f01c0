#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace mifade::circuit {

using Matrix3 = std::array<std::array<double, 3>, 3>;

enum class Side { transmit, receive };

/// One unidirectional coil of a tri-directional (TD) coil.
struct CoilSpec {
  double radius = 0.0;                 // m
  int turns = 1;
  double self_resistance = 0.0;        // ohm
  double base_self_inductance = 0.0;   // H
  std::optional<double> load_resistance;  // ohm, receivers only

  void validate(Side side) const;
  /// Real part of the impedance at any frequency: R (transmit) or R + R_L (receive).
  double series_resistance(Side side) const;
};

/// Single-layer circular loop estimate mu N^2 a (ln(8a / r_w) - 2).
double loop_self_inductance(double radius, int turns, double wire_radius, double permeability);

struct ResonatorBranch {
  double inductance = 0.0;   // H
  double capacitance = 0.0;  // F
  double pole_frequency() const;
};

/// Multi-frequency resonating compensation network: series capacitor C0 plus a
/// series chain of parallel LC tanks. Each tank contributes one impedance pole.
struct MurecNetwork {
  double series_capacitance = 0.0;  // C0
  std::vector<ResonatorBranch> branches;

  void validate() const;
  std::vector<double> pole_frequencies() const;
};

/// Center frequencies and bandwidths of the N+1 bands plus the TDMA user count K+1.
struct BandPlan {
  std::vector<double> centers;     // Hz, ascending
  std::vector<double> bandwidths;  // Hz
  int num_users = 1;

  std::size_t num_bands() const { return centers.size(); }
  /// Throws ValidationError unless bands are positive, ascending and pairwise disjoint.
  void validate() const;
  /// Every band gets total_bandwidth / (N+1).
  static BandPlan equal_split(std::vector<double> centers, double total_bandwidth, int num_users);
};

struct LinkGeometry {
  double distance = 0.0;  // m
  Matrix3 misalignment{};  // J_{pq}
  CoilSpec receiver;
  bool eddy_free = false;  // drop the medium loss (test hook)

  void validate() const;
};

Matrix3 identity_misalignment();

/// Reactance of the coil plus network, the bracketed term of Z(f).
double reactance(const CoilSpec& coil, const MurecNetwork& network, double frequency);

/// Z(f) = R + j X(f). Throws PoleProximityError within 1e-12 relative of a tank pole.
std::complex<double> coil_impedance(const CoilSpec& coil, const MurecNetwork& network,
                                    double frequency, Side side);

struct DesignOptions {
  double residual_tolerance = 1e-6;  // relative to the series resistance
  int max_iterations = 20;
};

/// Synthesizes a network resonating at every target.
///
/// Tank poles are pinned at the geometric mean of adjacent targets. With the poles
/// fixed the reactance is linear in (1/C0, L_1..L_N), so the partial-fraction
/// (Foster) expansion gives a closed-form seed that Newton then polishes against
/// the resonance conditions Im Z(f_n) = 0. Foster interleaving makes every
/// element positive.
///
/// Throws ValidationError for unordered or duplicate targets, ConvergenceError
/// if the residual stays above tolerance.
MurecNetwork design_murec(std::span<const double> targets, const CoilSpec& coil, Side side,
                          const DesignOptions& options = {});

/// max_n |Im Z(f_n)| / R
double resonance_residual(const CoilSpec& coil, const MurecNetwork& network,
                          std::span<const double> targets, Side side);

struct ImpedancePoint {
  double frequency;
  std::complex<double> impedance;
};

/// Linearly spaced sweep over [f_start, f_stop]; points within 1e-12 of a pole are skipped.
std::vector<ImpedancePoint> impedance_sweep(const CoilSpec& coil, const MurecNetwork& network,
                                            Side side, double f_start, double f_stop, int points);

struct SweepShape {
  int minima = 0;       // interior local minima of |Z|
  int poles = 0;        // interior local maxima of |Z| above pole_threshold
  std::vector<double> minimum_frequencies;
  std::vector<double> pole_frequencies;
};

SweepShape analyze_sweep(std::span<const ImpedancePoint> sweep, double pole_threshold);

// ---------------------------------------------------------------------------
// Coupling and the deterministic part of the channel
// ---------------------------------------------------------------------------

/// Eddy-free mutual inductance matrix: mu pi N_t N_r a_t^2 a_r^2 J_pq / (4 d^3).
Matrix3 static_mutual_inductance(const LinkGeometry& geometry, const CoilSpec& tx_coil,
                                 double permeability);

/// Equal-gain TD combining o M o^T with o = [1,1,1]/sqrt(3).
double combined_coupling(const Matrix3& mbar);

struct DeterministicGain {
  double log_amplitude = 0.0;  // ln |j 2 pi f R_L c / (Z_rx Z_tx)|
  double phase = 0.0;          // arg of the same quantity, radians
  double log_power = 0.0;      // ln of its squared magnitude; always 2 * log_amplitude
};

/// Throws DegenerateLinkError if the coupling is zero or an impedance vanishes.
DeterministicGain deterministic_gain_parts(double frequency, const Matrix3& mbar,
                                           std::complex<double> z_tx, std::complex<double> z_rx,
                                           double load_resistance);

/// Upper bound on the transmit power: 3 / (2 R_a (K+1)) * sum of band powers P_{k,n}.
double transmit_power_bound(std::span<const std::vector<double>> band_powers, double tx_resistance,
                            int num_users);

/// Per-(user, band) power that saturates the bound when every entry is equal.
double equal_split_band_power(double transmit_power, double tx_resistance, int num_users,
                              int num_bands);

}  // namespace mifade::circuit
