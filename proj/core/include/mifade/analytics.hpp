#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mifade/error.hpp"
#include "mifade/lognormal.hpp"
#include "mifade/numerics/quadrature.hpp"
#include "mifade/numerics/solver.hpp"

namespace mifade::analytics {

/// Craig-form BER parameters: P_e = alpha * Q(sqrt(beta * gamma)).
struct ModulationScheme {
  std::string name;
  double alpha = 1.0;
  double beta = 2.0;

  void validate() const;
};

/// BPSK (1, 2), QPSK per bit (1, 2) and 4-PAM (0.75, 0.4).
const std::vector<ModulationScheme>& builtin_modulations();
/// Throws ConfigError for an unknown name.
const ModulationScheme& find_modulation(std::string_view name);

enum class AnalysisMode { multiplexing, diversity };

std::string_view to_string(AnalysisMode mode);
AnalysisMode parse_analysis_mode(std::string_view text);

/// Powers and bandwidths for one user.
///
/// Multiplexing uses band_powers[n] and bandwidths[n]. Diversity transmits the
/// same base-band signal of power base_power on every band and combines over
/// base_bandwidth.
struct LinkBudget {
  std::vector<double> band_powers;  // W, P_{k,n}
  std::vector<double> bandwidths;   // Hz, B_n
  double noise_density = 0.0;       // W/Hz, N_0
  double base_power = 0.0;          // W, P_{k,b}
  double base_bandwidth = 0.0;      // Hz, B_b

  void validate(AnalysisMode mode) const;
  /// ln(P_{k,n} / (N_0 B_n))
  double band_snr_offset(std::size_t band) const;
  /// ln(P_{k,b} / (N_0 B_b))
  double base_snr_offset() const;
};

inline constexpr std::size_t kCombinedBand = static_cast<std::size_t>(-1);

/// ln(gamma) ~ N(params.mu, params.sigma2).
struct SnrDistribution {
  LognormalParams params;
  std::size_t band = kCombinedBand;
  AnalysisMode mode = AnalysisMode::multiplexing;

  double pdf(double x) const { return params.pdf(x); }
  double cdf(double x) const { return params.cdf(x); }
  double mean() const { return params.mean(); }
  double variance() const { return params.variance(); }
};

SnrDistribution snr_params_multiplexing(const LognormalParams& power, const LinkBudget& budget,
                                        std::size_t band);

// ---------------------------------------------------------------------------
// Per-band metrics
// ---------------------------------------------------------------------------

/// Closed-form ergodic capacity B E[ln(1 + gamma)] in nat/s from the erfcx series.
/// Every term is evaluated in whichever of its two equivalent forms cannot
/// overflow, so arbitrarily large |E| / sqrt(D) is safe. D = 0 gives B ln(1 + e^E).
double ergodic_capacity(const LognormalParams& snr, double bandwidth);
double ergodic_capacity_band(const SnrDistribution& snr, double bandwidth);

/// The same expectation by Gauss-Hermite quadrature of ln(1 + e^x).
double ergodic_capacity_quadrature(const LognormalParams& snr, double bandwidth,
                                   const numerics::QuadratureRule& rule);

/// E[exp(-s X)] for ln X ~ N(E, D) by Gauss-Hermite; exact when D = 0.
double lognormal_mgf(const LognormalParams& params, double s, const numerics::QuadratureRule& rule);

/// (alpha / pi) int_0^{pi/2} M(beta / (2 sin^2 t)) dt by adaptive quadrature.
double average_ber(const LognormalParams& snr, const ModulationScheme& modulation,
                   const numerics::QuadratureRule& rule);
double average_ber_band(const SnrDistribution& snr, const ModulationScheme& modulation,
                        const numerics::QuadratureRule& rule);

/// P(gamma < gamma_th). With D = 0 this is a step with value 1/2 at the threshold.
double outage(const LognormalParams& snr, double gamma_th);
double outage_band(const SnrDistribution& snr, double gamma_th);

// ---------------------------------------------------------------------------
// Lognormal sums
// ---------------------------------------------------------------------------

/// Moment matching of a sum of independent lognormals to one lognormal.
LognormalParams fenton_wilkinson(std::span<const LognormalParams> addends);

struct MgfMatch {
  LognormalParams params;
  double residual = 0.0;  // max |M_match(s_j) - prod_n M_n(s_j)|
  int iterations = 0;
  bool degraded = false;  // true when params is the Fenton-Wilkinson fallback
  std::array<double, 2> probes{};
};

/// Raised when the MGF equations do not converge; carries the fallback.
class MgfMatchError : public ConvergenceError {
 public:
  MgfMatchError(const std::string& message, MgfMatch fallback);
  const MgfMatch& fallback() const noexcept { return fallback_; }

 private:
  MgfMatch fallback_;
};

struct MgfMatchOptions {
  std::optional<std::array<double, 2>> probes;  // default 0.5 / m1 and 2 / m1
  numerics::NewtonOptions newton{1e-13, 200, 1e-7};
};

/// Solves M_single(s_j; E, D) = prod_n M_n(s_j) at two probes for the
/// independent lognormal addends. Seeded by Fenton-Wilkinson.
MgfMatch mgf_match_lognormal_sum(std::span<const LognormalParams> addends,
                                 const numerics::QuadratureRule& rule,
                                 const MgfMatchOptions& options = {});
/// As above but returns the degraded fallback instead of throwing.
MgfMatch mgf_match_or_fallback(std::span<const LognormalParams> addends,
                               const numerics::QuadratureRule& rule,
                               const MgfMatchOptions& options = {});

SnrDistribution snr_params_diversity(const LognormalParams& matched, const LinkBudget& budget);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct MetricsRow {
  std::size_t user = 0;
  std::size_t band = kCombinedBand;  // kCombinedBand for a diversity-combined row
  LognormalParams snr;
  double bandwidth = 0.0;
  double capacity = 0.0;  // nat/s
  double ber = 0.0;
  double outage = 0.0;
};

MetricsRow evaluate_metrics(std::size_t user, const SnrDistribution& snr, double bandwidth,
                            const ModulationScheme& modulation, double gamma_th,
                            const numerics::QuadratureRule& rule);

struct PerformanceReport {
  AnalysisMode mode = AnalysisMode::multiplexing;
  std::string modulation;
  double gamma_th = 0.0;
  std::size_t num_users = 0;
  std::size_t num_bands = 0;
  std::vector<MetricsRow> rows;
  double network_capacity = 0.0;  // C_M or C_D, nat/s
  double network_ber = 0.0;       // P_{e,M} or P_{e,D}
  double network_outage = 0.0;    // P_{o,M} or P_{o,D}
};

/// C_M = sum C_{k,n} / (K+1); P_{e,M} = mean BER over all (k, n);
/// P_{o,M} = product of every P_{o,kn}. Expects num_users * num_bands rows.
PerformanceReport network_multiplexing(std::vector<MetricsRow> rows, std::size_t num_users,
                                       std::size_t num_bands, std::string modulation, double gamma_th);

/// One combined row per user: C_D = sum C_{k,d} / (K+1), P_{e,D} mean, P_{o,D} product.
PerformanceReport diversity_report(std::span<const SnrDistribution> users, double base_bandwidth,
                                   const ModulationScheme& modulation, double gamma_th,
                                   std::size_t num_bands, const numerics::QuadratureRule& rule);

}  // namespace mifade::analytics
