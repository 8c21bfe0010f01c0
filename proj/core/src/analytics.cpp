#include "mifade/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mifade/numerics/capacity_fit.hpp"
#include "mifade/numerics/special_functions.hpp"

namespace mifade::analytics {

namespace {

constexpr double kMgfResidualTarget = 1e-10;

// exp(-E^2 / 2D) erfcx(y), rewritten as exp(log_scale) erfc(y) when y < 0,
// where erfcx(y) would overflow but the product stays small.
double capacity_series_term(double y, double gaussian_exponent, double log_scale) {
  if (y >= 0.0) return std::exp(gaussian_exponent) * numerics::erfcx(y);
  return std::exp(log_scale) * numerics::erfc(y);
}

std::array<double, 2> default_probes(std::span<const LognormalParams> addends) {
  double m1 = 0.0;
  for (const auto& a : addends) m1 += a.mean();
  return {0.5 / m1, 2.0 / m1};
}

}  // namespace

void ModulationScheme::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw ValidationError(fmt::format("modulation '{}' needs alpha > 0 and beta > 0", name));
  }
}

const std::vector<ModulationScheme>& builtin_modulations() {
  static const std::vector<ModulationScheme> schemes{
      {"bpsk", 1.0, 2.0},
      {"qpsk", 1.0, 2.0},
      {"4pam", 0.75, 0.4},
  };
  return schemes;
}

const ModulationScheme& find_modulation(std::string_view name) {
  for (const auto& m : builtin_modulations()) {
    if (m.name == name) return m;
  }
  throw ConfigError("", fmt::format("unknown modulation '{}' (bpsk|qpsk|4pam)", name));
}

std::string_view to_string(AnalysisMode mode) {
  return mode == AnalysisMode::multiplexing ? "multiplexing" : "diversity";
}

AnalysisMode parse_analysis_mode(std::string_view text) {
  if (text == "multiplexing") return AnalysisMode::multiplexing;
  if (text == "diversity") return AnalysisMode::diversity;
  throw ConfigError("", fmt::format("unknown analysis mode '{}' (multiplexing|diversity)", text));
}

void LinkBudget::validate(AnalysisMode mode) const {
  if (!(noise_density > 0.0)) throw ValidationError("noise density must be > 0");
  if (mode == AnalysisMode::multiplexing) {
    if (band_powers.empty() || band_powers.size() != bandwidths.size()) {
      throw ValidationError("need one power and one bandwidth per band");
    }
    for (std::size_t n = 0; n < band_powers.size(); ++n) {
      if (!(band_powers[n] > 0.0) || !(bandwidths[n] > 0.0)) {
        throw ValidationError(fmt::format("band {}: power and bandwidth must be > 0", n));
      }
    }
  } else if (!(base_power > 0.0) || !(base_bandwidth > 0.0)) {
    throw ValidationError("diversity needs a positive base power and base bandwidth");
  }
}

double LinkBudget::band_snr_offset(std::size_t band) const {
  return std::log(band_powers.at(band) / (noise_density * bandwidths.at(band)));
}

double LinkBudget::base_snr_offset() const {
  return std::log(base_power / (noise_density * base_bandwidth));
}

SnrDistribution snr_params_multiplexing(const LognormalParams& power, const LinkBudget& budget,
                                        std::size_t band) {
  power.validate();
  return {{power.mu + budget.band_snr_offset(band), power.sigma2}, band, AnalysisMode::multiplexing};
}

double ergodic_capacity(const LognormalParams& snr, double bandwidth) {
  snr.validate();
  const double e = snr.mu;
  const double d = snr.sigma2;
  if (d == 0.0) return bandwidth * numerics::softplus(e);

  const auto& a = numerics::capacity_coefficients();
  const double sigma = std::sqrt(d);
  const double ratio = e / (sigma * std::numbers::sqrt2);
  const double gaussian_exponent = -e * e / (2.0 * d);
  double series = 0.0;
  for (int k = 0; k < numerics::kCapacityTerms; ++k) {
    const double i = k + 1.0;
    const double base = sigma * i / std::numbers::sqrt2;
    const double plus = capacity_series_term(base + ratio, gaussian_exponent, 0.5 * i * i * d + i * e);
    const double minus = capacity_series_term(base - ratio, gaussian_exponent, 0.5 * i * i * d - i * e);
    series += a[k] * (plus + minus);
  }
  const double positive_part =
      sigma / std::sqrt(2.0 * std::numbers::pi) * std::exp(gaussian_exponent) + 0.5 * e * numerics::erfc(-ratio);
  return std::max(0.0, bandwidth * (0.5 * series + positive_part));
}

double ergodic_capacity_band(const SnrDistribution& snr, double bandwidth) {
  return ergodic_capacity(snr.params, bandwidth);
}

double ergodic_capacity_quadrature(const LognormalParams& snr, double bandwidth,
                                   const numerics::QuadratureRule& rule) {
  snr.validate();
  if (bandwidth == 0.0) return 0.0;
  if (snr.degenerate()) return bandwidth * numerics::softplus(snr.mu);
  const double scale = std::sqrt(2.0 * snr.sigma2);
  const double mean = rule.integrate([&](double c) { return numerics::softplus(snr.mu + scale * c); });
  return bandwidth * mean / std::sqrt(std::numbers::pi);
}

double lognormal_mgf(const LognormalParams& params, double s, const numerics::QuadratureRule& rule) {
  if (s < 0.0) throw DomainError("the lognormal MGF is evaluated for s >= 0 only");
  if (params.degenerate()) return std::exp(-s * std::exp(params.mu));
  const double scale = std::sqrt(2.0 * params.sigma2);
  const double value = rule.integrate([&](double c) { return std::exp(-s * std::exp(c * scale + params.mu)); });
  return value / std::sqrt(std::numbers::pi);
}

double average_ber(const LognormalParams& snr, const ModulationScheme& modulation,
                   const numerics::QuadratureRule& rule) {
  modulation.validate();
  snr.validate();
  const auto integrand = [&](double t) {
    const double sn = std::sin(t);
    if (sn == 0.0) return 0.0;
    return lognormal_mgf(snr, modulation.beta / (2.0 * sn * sn), rule);
  };
  const double integral = numerics::integrate_adaptive(integrand, 0.0, std::numbers::pi / 2.0, 1e-12).value;
  return std::clamp(modulation.alpha / std::numbers::pi * integral, 0.0, modulation.alpha / 2.0);
}

double average_ber_band(const SnrDistribution& snr, const ModulationScheme& modulation,
                        const numerics::QuadratureRule& rule) {
  return average_ber(snr.params, modulation, rule);
}

double outage(const LognormalParams& snr, double gamma_th) {
  snr.validate();
  if (!(gamma_th > 0.0)) return 0.0;
  const double t = std::log(gamma_th) - snr.mu;
  if (snr.degenerate()) return t < 0.0 ? 0.0 : (t > 0.0 ? 1.0 : 0.5);
  return 0.5 * numerics::erfc(-t / std::sqrt(2.0 * snr.sigma2));
}

double outage_band(const SnrDistribution& snr, double gamma_th) { return outage(snr.params, gamma_th); }

LognormalParams fenton_wilkinson(std::span<const LognormalParams> addends) {
  if (addends.empty()) throw DomainError("a lognormal sum needs at least one addend");
  double m1 = 0.0;
  double var = 0.0;
  for (const auto& a : addends) {
    m1 += a.mean();
    var += a.variance();
  }
  const double sigma2 = std::log1p(var / (m1 * m1));
  return {std::log(m1) - 0.5 * sigma2, sigma2};
}

MgfMatchError::MgfMatchError(const std::string& message, MgfMatch fallback)
    : ConvergenceError(message, fallback.iterations, fallback.residual), fallback_(fallback) {}

MgfMatch mgf_match_lognormal_sum(std::span<const LognormalParams> addends,
                                 const numerics::QuadratureRule& rule, const MgfMatchOptions& options) {
  if (addends.empty()) throw DomainError("a lognormal sum needs at least one addend");
  for (const auto& a : addends) a.validate();

  MgfMatch out;
  out.probes = options.probes.value_or(default_probes(addends));
  if (!(out.probes[0] > 0.0) || !(out.probes[1] > 0.0) || out.probes[0] == out.probes[1]) {
    throw DomainError("MGF probes must be positive and distinct");
  }

  const bool all_degenerate =
      std::all_of(addends.begin(), addends.end(), [](const auto& a) { return a.degenerate(); });
  if (all_degenerate) {
    double total = 0.0;
    for (const auto& a : addends) total += std::exp(a.mu);
    out.params = {std::log(total), 0.0};
    return out;
  }

  std::array<double, 2> target{1.0, 1.0};
  for (int j = 0; j < 2; ++j) {
    for (const auto& a : addends) target[j] *= lognormal_mgf(a, out.probes[j], rule);
  }
  const auto residual = [&](const numerics::Vector2& x) -> numerics::Vector2 {
    const LognormalParams p{x[0], x[1] * x[1]};
    return {lognormal_mgf(p, out.probes[0], rule) - target[0], lognormal_mgf(p, out.probes[1], rule) - target[1]};
  };
  const auto max_residual = [&](const LognormalParams& p) {
    const auto r = residual({p.mu, std::sqrt(p.sigma2)});
    return std::max(std::abs(r[0]), std::abs(r[1]));
  };

  const LognormalParams seed = fenton_wilkinson(addends);
  MgfMatch fallback = out;
  fallback.params = seed;
  fallback.residual = max_residual(seed);
  fallback.degraded = true;

  numerics::NewtonResult solved;
  try {
    solved = numerics::solve_2x2_nonlinear(residual, {seed.mu, std::sqrt(seed.sigma2)}, options.newton);
  } catch (const numerics::NewtonFailure& e) {
    fallback.iterations = e.best().iterations;
    const LognormalParams best{e.best().point[0], e.best().point[1] * e.best().point[1]};
    if (max_residual(best) < kMgfResidualTarget) {
      out.params = best;
      out.residual = max_residual(best);
      out.iterations = e.best().iterations;
      return out;
    }
    throw MgfMatchError(fmt::format("MGF matching did not converge: {}", e.what()), fallback);
  }
  out.params = {solved.point[0], solved.point[1] * solved.point[1]};
  out.residual = max_residual(out.params);
  out.iterations = solved.iterations;
  if (!(out.residual < kMgfResidualTarget)) {
    fallback.iterations = solved.iterations;
    throw MgfMatchError(fmt::format("MGF matching stopped at residual {}", out.residual), fallback);
  }
  return out;
}

MgfMatch mgf_match_or_fallback(std::span<const LognormalParams> addends, const numerics::QuadratureRule& rule,
                               const MgfMatchOptions& options) {
  try {
    return mgf_match_lognormal_sum(addends, rule, options);
  } catch (const MgfMatchError& e) {
    return e.fallback();
  }
}

SnrDistribution snr_params_diversity(const LognormalParams& matched, const LinkBudget& budget) {
  matched.validate();
  return {{matched.mu + budget.base_snr_offset(), matched.sigma2}, kCombinedBand, AnalysisMode::diversity};
}

MetricsRow evaluate_metrics(std::size_t user, const SnrDistribution& snr, double bandwidth,
                            const ModulationScheme& modulation, double gamma_th,
                            const numerics::QuadratureRule& rule) {
  MetricsRow row;
  row.user = user;
  row.band = snr.band;
  row.snr = snr.params;
  row.bandwidth = bandwidth;
  row.capacity = ergodic_capacity(snr.params, bandwidth);
  row.ber = average_ber(snr.params, modulation, rule);
  row.outage = outage(snr.params, gamma_th);
  return row;
}

PerformanceReport network_multiplexing(std::vector<MetricsRow> rows, std::size_t num_users,
                                       std::size_t num_bands, std::string modulation, double gamma_th) {
  if (num_users == 0 || num_bands == 0 || rows.size() != num_users * num_bands) {
    throw DomainError(fmt::format("expected {} x {} per-band rows, got {}", num_users, num_bands, rows.size()));
  }
  PerformanceReport report;
  report.mode = AnalysisMode::multiplexing;
  report.modulation = std::move(modulation);
  report.gamma_th = gamma_th;
  report.num_users = num_users;
  report.num_bands = num_bands;
  double capacity = 0.0;
  double ber = 0.0;
  double outage_product = 1.0;
  for (const auto& r : rows) {
    capacity += r.capacity;
    ber += r.ber;
    outage_product *= r.outage;
  }
  report.network_capacity = capacity / static_cast<double>(num_users);
  report.network_ber = ber / static_cast<double>(rows.size());
  report.network_outage = outage_product;
  report.rows = std::move(rows);
  return report;
}

PerformanceReport diversity_report(std::span<const SnrDistribution> users, double base_bandwidth,
                                   const ModulationScheme& modulation, double gamma_th,
                                   std::size_t num_bands, const numerics::QuadratureRule& rule) {
  if (users.empty()) throw DomainError("diversity report needs at least one user");
  PerformanceReport report;
  report.mode = AnalysisMode::diversity;
  report.modulation = modulation.name;
  report.gamma_th = gamma_th;
  report.num_users = users.size();
  report.num_bands = num_bands;
  double capacity = 0.0;
  double ber = 0.0;
  double outage_product = 1.0;
  for (std::size_t k = 0; k < users.size(); ++k) {
    auto row = evaluate_metrics(k, users[k], base_bandwidth, modulation, gamma_th, rule);
    row.band = kCombinedBand;
    capacity += row.capacity;
    ber += row.ber;
    outage_product *= row.outage;
    report.rows.push_back(row);
  }
  report.network_capacity = capacity / static_cast<double>(users.size());
  report.network_ber = ber / static_cast<double>(users.size());
  report.network_outage = outage_product;
  return report;
}

}  // namespace mifade::analytics
