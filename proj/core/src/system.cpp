#include "mifade/system.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mifade/error.hpp"
#include "mifade/numerics/quadrature.hpp"

namespace mifade::system {

std::vector<std::vector<double>> band_powers(const scenario::Scenario& scenario) {
  if (scenario.budget.band_powers) return *scenario.budget.band_powers;
  const double p = circuit::equal_split_band_power(scenario.budget.transmit_power, scenario.transmitter.self_resistance,
                                                   scenario.bands.num_users,
                                                   static_cast<int>(scenario.num_bands()));
  return std::vector<std::vector<double>>(scenario.num_users(), std::vector<double>(scenario.num_bands(), p));
}

SystemModel::SystemModel(scenario::Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  const auto& plan = scenario_.bands;
  tx_network_ = circuit::design_murec(plan.centers, scenario_.transmitter, circuit::Side::transmit);

  std::vector<circuit::MurecNetwork> per_link;
  for (const auto& link : scenario_.links) {
    per_link.push_back(circuit::design_murec(plan.centers, link.geometry.receiver, circuit::Side::receive));
  }

  const auto powers = band_powers(scenario_);
  const double mu = scenario_.permeability();
  for (std::size_t k = 0; k < scenario_.num_users(); ++k) {
    const auto link_index = k % scenario_.links.size();
    const auto& link = scenario_.links[link_index];
    rx_networks_.push_back(per_link[link_index]);
    const auto mbar = circuit::static_mutual_inductance(link.geometry, scenario_.transmitter, mu);
    const double load = *link.geometry.receiver.load_resistance;

    UserChannel user;
    user.budget.noise_density = scenario_.budget.noise_density;
    for (std::size_t n = 0; n < plan.num_bands(); ++n) {
      BandChannel band;
      band.frequency = plan.centers[n];
      band.bandwidth = plan.bandwidths[n];
      band.power = powers[k][n];
      band.z_tx = circuit::coil_impedance(scenario_.transmitter, tx_network_, band.frequency, circuit::Side::transmit);
      band.z_rx = circuit::coil_impedance(link.geometry.receiver, per_link[link_index], band.frequency,
                                          circuit::Side::receive);
      try {
        band.deterministic = circuit::deterministic_gain_parts(band.frequency, mbar, band.z_tx, band.z_rx, load);
      } catch (const DegenerateLinkError& e) {
        throw DegenerateLinkError(fmt::format("user {}: {}", k, e.what()));
      }
      if (link.geometry.eddy_free) {
        band.inverse_depths.assign(link.path.segments.size(), 0.0);
        band.channel.amplitude = {band.deterministic.log_amplitude, 0.0};
        band.channel.phase = band.deterministic.phase;
        band.channel.power = {band.deterministic.log_power, 0.0};
      } else {
        band.inverse_depths = fading::inverse_skin_depths(link.path, band.frequency);
        band.channel = fading::channel_log_params(link.path, band.frequency, band.deterministic);
      }
      band.snr_offset = std::log(band.power / (scenario_.budget.noise_density * band.bandwidth));
      user.budget.band_powers.push_back(band.power);
      user.budget.bandwidths.push_back(band.bandwidth);
      user.bands.push_back(std::move(band));
    }
    // Diversity sends one base-band signal on every band: per-band power and
    // the per-band bandwidth, averaged in case the plan is not uniform.
    const double nb = static_cast<double>(plan.num_bands());
    user.budget.base_power = std::accumulate(user.budget.band_powers.begin(), user.budget.band_powers.end(), 0.0) / nb;
    user.budget.base_bandwidth = std::accumulate(plan.bandwidths.begin(), plan.bandwidths.end(), 0.0) / nb;
    users_.push_back(std::move(user));
  }
}

std::vector<std::vector<analytics::SnrDistribution>> snr_laws(const SystemModel& model,
                                                              const AnalysisOptions& options,
                                                              std::vector<analytics::MgfMatch>* matches) {
  const auto& sc = model.scenario();
  const int order = options.hermite_order > 0 ? options.hermite_order : sc.analysis.hermite_order;
  std::vector<std::vector<analytics::SnrDistribution>> out;
  for (const auto& user : model.users()) {
    if (options.mode == analytics::AnalysisMode::multiplexing) {
      std::vector<analytics::SnrDistribution> row;
      for (std::size_t n = 0; n < user.bands.size(); ++n) {
        row.push_back(analytics::snr_params_multiplexing(user.bands[n].channel.power, user.budget, n));
      }
      out.push_back(std::move(row));
    } else {
      std::vector<LognormalParams> addends;
      for (const auto& band : user.bands) addends.push_back(band.channel.power);
      const auto match =
          analytics::mgf_match_or_fallback(addends, numerics::shared_gauss_hermite_rule(order), options.mgf);
      if (matches) matches->push_back(match);
      out.push_back({analytics::snr_params_diversity(match.params, user.budget)});
    }
  }
  return out;
}

AnalysisResult analyze(const SystemModel& model, const AnalysisOptions& options) {
  const auto& sc = model.scenario();
  const auto& modulation = analytics::find_modulation(options.modulation.empty() ? sc.analysis.modulation
                                                                                 : options.modulation);
  const double gamma_th = options.gamma_th > 0.0 ? options.gamma_th : sc.analysis.gamma_th;
  const int order = options.hermite_order > 0 ? options.hermite_order : sc.analysis.hermite_order;
  const auto& rule = numerics::shared_gauss_hermite_rule(order);

  AnalysisResult result;
  const auto laws = snr_laws(model, options, &result.matches);
  if (options.mode == analytics::AnalysisMode::multiplexing) {
    std::vector<analytics::MetricsRow> rows;
    for (std::size_t k = 0; k < laws.size(); ++k) {
      for (std::size_t n = 0; n < laws[k].size(); ++n) {
        rows.push_back(analytics::evaluate_metrics(k, laws[k][n], model.user(k).bands[n].bandwidth, modulation,
                                                   gamma_th, rule));
      }
    }
    result.report = analytics::network_multiplexing(std::move(rows), model.num_users(), model.num_bands(),
                                                    modulation.name, gamma_th);
  } else {
    std::vector<analytics::SnrDistribution> users;
    for (const auto& l : laws) users.push_back(l.front());
    result.report = analytics::diversity_report(users, model.user(0).budget.base_bandwidth, modulation, gamma_th,
                                                model.num_bands(), rule);
  }
  return result;
}

}  // namespace mifade::system
