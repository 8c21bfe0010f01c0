#include "mifade/cli/presets.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mifade/analytics.hpp"
#include "mifade/error.hpp"
#include "mifade/montecarlo.hpp"
#include "mifade/random.hpp"
#include "mifade/system.hpp"

namespace mifade::cli {

namespace {

constexpr int kSegments = 50;
constexpr double kPathLength = 20.0;           // m
constexpr double kMetalAttenuation = 11.0;     // nepers of mean eddy loss at 50 kHz
constexpr double kRelativeSpread = 0.1;        // sqrt(D_i) / E_i

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<double> arange(double start, double stop, double step) {
  std::vector<double> out;
  const auto n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
  for (int i = 0; i <= n; ++i) out.push_back(start + step * i);
  return out;
}

// Closed-form SNR laws for one scenario variant.
std::vector<std::vector<analytics::SnrDistribution>> laws(const system::SystemModel& model,
                                                          analytics::AnalysisMode mode) {
  system::AnalysisOptions options;
  options.mode = mode;
  return system::snr_laws(model, options);
}

std::vector<std::vector<analytics::SnrDistribution>> laws(const scenario::Scenario& s, analytics::AnalysisMode mode) {
  return laws(system::SystemModel(s), mode);
}

double network_capacity(const scenario::Scenario& s) {
  const system::SystemModel model(s);
  const auto l = laws(model, analytics::AnalysisMode::multiplexing);
  double total = 0.0;
  for (std::size_t k = 0; k < l.size(); ++k) {
    for (std::size_t n = 0; n < l[k].size(); ++n) {
      total += analytics::ergodic_capacity(l[k][n].params, model.user(k).bands[n].bandwidth);
    }
  }
  return total / static_cast<double>(model.num_users());
}

double diversity_ber(const scenario::Scenario& s) {
  const auto l = laws(s, analytics::AnalysisMode::diversity);
  const auto& modulation = analytics::find_modulation(s.analysis.modulation);
  const auto& rule = numerics::shared_gauss_hermite_rule(s.analysis.hermite_order);
  double total = 0.0;
  for (const auto& user : l) total += analytics::average_ber(user.front().params, modulation, rule);
  return total / static_cast<double>(l.size());
}

double network_outage(const std::vector<std::vector<analytics::SnrDistribution>>& l, double gamma_th) {
  double p = 1.0;
  for (const auto& user : l) {
    for (const auto& law : user) p *= analytics::outage(law.params, gamma_th);
  }
  return p;
}

scenario::Scenario with_power(scenario::Scenario s, double dbw) {
  s.budget.transmit_power = db_to_linear(dbw);
  s.budget.band_powers.reset();
  return s;
}

Figure power_sweep(std::string id, std::string title, const scenario::Scenario& base, bool diversity) {
  Figure fig{std::move(id), std::move(title), {}};
  const auto powers = arange(-5.0, 20.0, 1.0);
  for (int bands : {1, 2, 4, 8}) {
    const auto variant = base.with_bands(band_count_plan(bands, 4));
    Curve curve;
    curve.name = fmt::format("{}_bands_{}", fig.id, bands);
    curve.columns = {"transmit_power_dbw", diversity ? "ber" : "capacity_nat_s"};
    for (double p : powers) {
      const auto s = with_power(variant, p);
      curve.rows.push_back({p, diversity ? diversity_ber(s) : network_capacity(s)});
    }
    fig.curves.push_back(std::move(curve));
  }
  return fig;
}

Figure threshold_sweep(std::string id, std::string title, const scenario::Scenario& base, int users) {
  Figure fig{std::move(id), std::move(title), {}};
  const auto thresholds = arange(0.0, 25.0, 0.5);
  const auto add = [&](std::string name, const scenario::Scenario& s, analytics::AnalysisMode mode) {
    const auto l = laws(s, mode);
    Curve curve;
    curve.name = fmt::format("{}_{}", fig.id, name);
    curve.columns = {"gamma_th_db", "outage"};
    for (double t : thresholds) curve.rows.push_back({t, network_outage(l, db_to_linear(t))});
    fig.curves.push_back(std::move(curve));
  };
  add("single_band", base.with_bands(band_count_plan(1, users)), analytics::AnalysisMode::multiplexing);
  for (int bands : {2, 4, 8}) {
    const auto s = base.with_bands(band_count_plan(bands, users));
    add(fmt::format("multiplexing_bands_{}", bands), s, analytics::AnalysisMode::multiplexing);
    add(fmt::format("diversity_bands_{}", bands), s, analytics::AnalysisMode::diversity);
  }
  return fig;
}

std::vector<double> frequency_gaps() { return arange(2e3, 40e3, 2e3); }

Figure gap_sweep(std::string id, std::string title, const scenario::Scenario& base, std::string_view metric) {
  Figure fig{std::move(id), std::move(title), {}};
  const auto single = base.with_bands(band_count_plan(1, 4));
  const double gamma_th = base.analysis.gamma_th;
  const auto value = [&](const scenario::Scenario& s, analytics::AnalysisMode mode) {
    if (metric == "capacity_nat_s") return network_capacity(s);
    if (metric == "ber") return diversity_ber(s);
    return network_outage(laws(s, mode), gamma_th);
  };
  std::vector<std::pair<std::string, analytics::AnalysisMode>> schemes;
  if (metric == "capacity_nat_s") schemes = {{"multiplexing_2band", analytics::AnalysisMode::multiplexing}};
  if (metric == "ber") schemes = {{"diversity_2band", analytics::AnalysisMode::diversity}};
  if (metric == "outage") {
    schemes = {{"multiplexing_2band", analytics::AnalysisMode::multiplexing},
               {"diversity_2band", analytics::AnalysisMode::diversity}};
  }
  const double reference = value(single, analytics::AnalysisMode::multiplexing);
  for (const auto& [name, mode] : schemes) {
    Curve curve;
    curve.name = fmt::format("{}_{}", fig.id, name);
    curve.columns = {"delta_f_hz", std::string(metric)};
    for (double df : frequency_gaps()) curve.rows.push_back({df, value(base.with_bands(frequency_gap_plan(df, 4)), mode)});
    fig.curves.push_back(std::move(curve));
  }
  Curve ref;
  ref.name = fmt::format("{}_single_band", fig.id);
  ref.columns = {"delta_f_hz", std::string(metric)};
  for (double df : frequency_gaps()) ref.rows.push_back({df, reference});
  fig.curves.push_back(std::move(ref));
  return fig;
}

Figure snr_cdf(const scenario::Scenario& base, const FigureOptions& options) {
  const system::SystemModel model(base);
  montecarlo::SimulationConfig config;
  config.samples = options.samples;
  config.seed = options.seed;
  config.workers = options.workers;
  config.sampling_mode = base.simulation.sampling_mode;
  const auto result = montecarlo::simulate(model, config);
  const auto& s = result.series.front();
  Curve curve;
  curve.name = "fig3_cdf";
  curve.columns = {"snr_linear", "empirical_cdf", "analytic_cdf"};
  for (std::size_t j = 0; j < s.cdf_grid.size(); ++j) {
    curve.rows.push_back({s.cdf_grid[j], s.empirical_cdf(j), s.analytic.cdf(s.cdf_grid[j])});
  }
  return {"fig3", "SNR CDF: Monte Carlo vs lognormal law (user 0, band 0)", {std::move(curve)}};
}

}  // namespace

scenario::Scenario generate_default_scenario(std::uint64_t seed) {
  scenario::Scenario s;
  s.name = "paper-v";
  s.catalog = media::builtin_catalog();
  const double mu = s.catalog.permeability();

  s.transmitter.radius = 0.6;
  s.transmitter.turns = 200;
  s.transmitter.self_resistance = 2.2619;
  s.transmitter.base_self_inductance =
      circuit::loop_self_inductance(0.6, 200, scenario::kDefaultWireRadius, mu);

  scenario::LinkConfig link;
  link.geometry.distance = kPathLength;
  link.geometry.misalignment = circuit::identity_misalignment();
  link.geometry.receiver.radius = 0.2;
  link.geometry.receiver.turns = 50;
  link.geometry.receiver.self_resistance = 0.1885;
  link.geometry.receiver.load_resistance = 0.1885;
  link.geometry.receiver.base_self_inductance =
      circuit::loop_self_inductance(0.2, 50, scenario::kDefaultWireRadius, mu);
  link.path.permeability = mu;

  random::Stream stream(seed, {});
  const auto& media = s.catalog.entries();
  std::vector<const media::Medium*> chosen;
  int metals = 0;
  for (int i = 0; i < kSegments; ++i) {
    const auto idx = static_cast<std::size_t>(stream.uniform() * static_cast<double>(media.size()));
    chosen.push_back(&media[std::min(idx, media.size() - 1)]);
    metals += chosen.back()->conductor_class == media::ConductorClass::good_conductor;
  }
  std::vector<double> means(kSegments);
  double metal_length = 0.0;
  double poor_weight = 0.0;
  for (int i = 0; i < kSegments; ++i) {
    const double u = 0.5 + stream.uniform();
    if (chosen[i]->conductor_class == media::ConductorClass::good_conductor) {
      const double delta = media::skin_depth(*chosen[i], kDefaultCenter, mu).meters;
      means[i] = kMetalAttenuation / metals * u * delta;
      metal_length += means[i];
    } else {
      means[i] = -u;  // weight, rescaled below
      poor_weight += u;
    }
  }
  for (int i = 0; i < kSegments; ++i) {
    if (means[i] < 0.0) means[i] = -means[i] / poor_weight * (kPathLength - metal_length);
    fading::PathSegment seg;
    seg.medium = *chosen[i];
    seg.mean_length = means[i];
    seg.length_variance = std::pow(kRelativeSpread * means[i], 2);
    seg.distribution = fading::LengthDistribution::uniform;
    link.path.segments.push_back(std::move(seg));
  }
  s.links.push_back(std::move(link));

  s.bands = band_count_plan(1, 4);
  s.budget.transmit_power = db_to_linear(7.0);
  s.budget.noise_density = db_to_linear(-185.0);
  s.analysis.modulation = "bpsk";
  s.analysis.hermite_order = numerics::kDefaultHermiteOrder;
  s.simulation.seed = seed;
  s.simulation.samples = 100000;
  s.simulation.sampling_mode = fading::SamplingMode::independent_per_band;

  // Median single-band SNR of user 0.
  s.analysis.gamma_th = 1.0;
  const auto l = laws(s, analytics::AnalysisMode::multiplexing);
  s.analysis.gamma_th = std::exp(l.front().front().params.mu);
  s.validate();
  return s;
}

circuit::BandPlan band_count_plan(int bands, int users) {
  std::vector<double> centers;
  switch (bands) {
    case 1:
      centers = {50e3};
      break;
    case 2:
      centers = {40e3, 60e3};
      break;
    case 4:
      centers = {35e3, 45e3, 55e3, 65e3};
      break;
    case 8:
      for (int i = 0; i < 8; ++i) centers.push_back(32.5e3 + 5e3 * i);
      break;
    default:
      throw ConfigError("", fmt::format("band-count presets exist for 1, 2, 4 and 8 bands, not {}", bands));
  }
  return circuit::BandPlan::equal_split(std::move(centers), kDefaultTotalBandwidth, users);
}

circuit::BandPlan frequency_gap_plan(double delta_f, int users) {
  return circuit::BandPlan::equal_split({kDefaultCenter - delta_f / 2.0, kDefaultCenter + delta_f / 2.0},
                                        kDefaultTotalBandwidth, users);
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"};
  return ids;
}

Figure compute_figure(std::string_view id, const scenario::Scenario& base, const FigureOptions& options) {
  if (id == "fig3") return snr_cdf(base, options);
  if (id == "fig4") return power_sweep("fig4", "Multiplexing capacity C_M vs P_t, K+1=4", base, false);
  if (id == "fig5") return power_sweep("fig5", "Diversity BER P_e,D vs P_t, K+1=4", base, true);
  if (id == "fig6") return threshold_sweep("fig6", "Network outage vs gamma_th, K+1=1", base, 1);
  if (id == "fig7") return threshold_sweep("fig7", "Network outage vs gamma_th, K+1=4", base, 4);
  if (id == "fig8") return gap_sweep("fig8", "2-band multiplexing capacity vs frequency gap, K+1=4", base, "capacity_nat_s");
  if (id == "fig9") return gap_sweep("fig9", "2-band diversity BER vs frequency gap, K+1=4", base, "ber");
  if (id == "fig10") return gap_sweep("fig10", "2-band network outage vs frequency gap, K+1=4", base, "outage");
  std::string valid;
  for (const auto& f : figure_ids()) valid += (valid.empty() ? "" : ", ") + f;
  throw ConfigError("", fmt::format("unknown figure '{}' (valid: {})", id, valid));
}

}  // namespace mifade::cli
