#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mifade/analytics.hpp"
#include "mifade/fading.hpp"
#include "mifade/lognormal.hpp"
#include "mifade/numerics/statistics.hpp"
#include "mifade/system.hpp"

namespace mifade::montecarlo {

inline constexpr std::size_t kMinStatisticalSamples = 1000;
inline constexpr std::size_t kCdfGridPoints = 512;
/// Samples per work unit. Each chunk is accumulated sequentially and chunks are
/// merged in index order, which makes results independent of the worker count.
inline constexpr std::size_t kChunkSize = 4096;

struct SimulationConfig {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  fading::SamplingMode sampling_mode = fading::SamplingMode::independent_per_band;
  analytics::AnalysisMode analysis_mode = analytics::AnalysisMode::multiplexing;
  unsigned workers = 1;
  std::string modulation;  // empty: the scenario's
  double gamma_th = 0.0;   // <= 0: the scenario's
  /// Keep raw log-SNR draws for an exact KS distance while the total stays
  /// under this many values; beyond it KS is read off the CDF grid.
  std::size_t max_stored_samples = std::size_t{1} << 24;
};

/// One simulated SNR: a (user, band) pair, or a user's MRC-combined SNR.
struct Series {
  std::size_t user = 0;
  std::size_t band = analytics::kCombinedBand;
  double bandwidth = 0.0;
  LognormalParams analytic;  // closed-form ln(gamma) law for the same series

  numerics::RunningMoments log_snr;
  numerics::RunningMoments capacity;  // B ln(1 + gamma), nat/s
  numerics::RunningMoments ber;       // alpha Q(sqrt(beta gamma))
  numerics::RunningMoments outage;    // 1{gamma < gamma_th}

  std::vector<double> cdf_grid;              // linear SNR, log-spaced
  std::vector<std::uint64_t> cdf_counts;     // samples with gamma <= grid point
  std::vector<double> log_snr_samples;       // empty when over the storage cap

  double ks = 0.0;
  bool ks_exact = false;

  double empirical_cdf(std::size_t grid_index) const;
};

struct SimulationResult {
  SimulationConfig config;  // with scenario defaults filled in
  std::string modulation;
  double gamma_th = 0.0;
  std::vector<Series> series;
  numerics::RunningMoments network_capacity;  // per-draw sum / (K+1)
  numerics::RunningMoments network_ber;       // per-draw mean over series
  numerics::RunningMoments network_outage;    // per-draw joint outage of all series
};

/// Draws path lengths, forms G, |H|^2 and the SNR for every sample and
/// accumulates streaming statistics. Refuses fewer than kMinStatisticalSamples
/// draws (ValidationError). Deterministic in (model, config) for any worker count.
SimulationResult simulate(const system::SystemModel& model, const SimulationConfig& config);

struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Sample means with standard errors over linear SNR samples.
Estimate empirical_capacity(std::span<const double> snr, double bandwidth);
Estimate empirical_ber(std::span<const double> snr, const analytics::ModulationScheme& modulation);
Estimate empirical_outage(std::span<const double> snr, double gamma_th);

enum class CheckStatus { pass, fail, gap_only };
std::string_view to_string(CheckStatus status);

struct ComparisonRow {
  std::string metric;
  std::size_t user = 0;
  std::size_t band = analytics::kCombinedBand;  // kCombinedBand also marks network rows
  bool network = false;
  double analytic = 0.0;
  double empirical = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double standard_error = 0.0;
  CheckStatus status = CheckStatus::pass;
};

struct CompareOptions {
  double sigma_threshold = 3.0;
  double ks_tolerance = 0.02;
  /// Subset of {"capacity", "ber", "outage", "ks"}; empty gives an empty table.
  std::vector<std::string> metrics{"capacity", "ber", "outage", "ks"};
};

/// Per-metric analytic vs empirical table. Rows whose analytic side assumes
/// cross-band independence while the simulation shared one path draw are
/// reported as gap_only.
std::vector<ComparisonRow> compare(const SimulationResult& result, const analytics::PerformanceReport& report,
                                   const CompareOptions& options = {});

}  // namespace mifade::montecarlo
