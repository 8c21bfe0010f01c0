#pragma once

#include <cstddef>
#include <vector>

#include "mifade/analytics.hpp"
#include "mifade/circuit.hpp"
#include "mifade/fading.hpp"
#include "mifade/scenario.hpp"

namespace mifade::system {

/// Everything about one (user, band) pair that does not depend on the random
/// segment lengths.
struct BandChannel {
  double frequency = 0.0;  // Hz
  double bandwidth = 0.0;  // Hz
  double power = 0.0;      // W, P_{k,n}
  std::complex<double> z_tx;
  std::complex<double> z_rx;
  circuit::DeterministicGain deterministic;
  fading::ChannelLogParams channel;      // ln|H| and ln|H|^2 laws
  std::vector<double> inverse_depths;    // 1/delta_i(f), one per path segment
  double snr_offset = 0.0;               // ln(P_{k,n} / (N_0 B_n))
};

struct UserChannel {
  std::vector<BandChannel> bands;
  analytics::LinkBudget budget;
};

/// Per-(user, band) powers: the explicit table, or the equal split that
/// saturates the transmit-power bound.
std::vector<std::vector<double>> band_powers(const scenario::Scenario& scenario);

/// The scenario with its coils synthesized and every deterministic quantity
/// evaluated. Immutable once built; safe to share across threads.
class SystemModel {
 public:
  /// Throws DegenerateLinkError if any link has zero coupling.
  explicit SystemModel(scenario::Scenario scenario);

  const scenario::Scenario& scenario() const { return scenario_; }
  const circuit::MurecNetwork& transmit_network() const { return tx_network_; }
  const circuit::MurecNetwork& receive_network(std::size_t user) const { return rx_networks_.at(user); }
  const std::vector<UserChannel>& users() const { return users_; }
  const UserChannel& user(std::size_t k) const { return users_.at(k); }
  std::size_t num_users() const { return users_.size(); }
  std::size_t num_bands() const { return scenario_.num_bands(); }

 private:
  scenario::Scenario scenario_;
  circuit::MurecNetwork tx_network_;
  std::vector<circuit::MurecNetwork> rx_networks_;
  std::vector<UserChannel> users_;
};

struct AnalysisOptions {
  analytics::AnalysisMode mode = analytics::AnalysisMode::multiplexing;
  std::string modulation;  // empty: the scenario's
  double gamma_th = 0.0;   // <= 0: the scenario's
  int hermite_order = 0;   // <= 0: the scenario's
  analytics::MgfMatchOptions mgf;
};

struct AnalysisResult {
  analytics::PerformanceReport report;
  /// Diversity only: the MGF match for each user (degraded flag set if the
  /// Fenton-Wilkinson fallback was used).
  std::vector<analytics::MgfMatch> matches;
};

/// Full closed-form pipeline for every user and band.
AnalysisResult analyze(const SystemModel& model, const AnalysisOptions& options = {});

/// SNR laws used by the analysis: [user][band] in multiplexing mode, one
/// combined entry per user in diversity mode.
std::vector<std::vector<analytics::SnrDistribution>> snr_laws(const SystemModel& model,
                                                              const AnalysisOptions& options,
                                                              std::vector<analytics::MgfMatch>* matches = nullptr);

}  // namespace mifade::system
