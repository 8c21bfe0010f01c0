#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mifade/circuit.hpp"
#include "mifade/lognormal.hpp"
#include "mifade/media.hpp"
#include "mifade/random.hpp"

namespace mifade::fading {

enum class LengthDistribution { uniform, gaussian_truncated, exponential };

std::string_view to_string(LengthDistribution d);
LengthDistribution parse_length_distribution(std::string_view text);

/// One stretch of the path through a single medium. Its length is random with
/// the declared mean and variance:
///  - uniform on [E - sqrt(3D), E + sqrt(3D)]
///  - normal N(E, D) with draws <= 0 rejected
///  - shifted exponential E - sqrt(D) + Exp(1 / sqrt(D))
struct PathSegment {
  media::Medium medium;
  double mean_length = 0.0;      // m
  double length_variance = 0.0;  // m^2
  LengthDistribution distribution = LengthDistribution::uniform;

  void validate() const;
};

struct PathModel {
  std::vector<PathSegment> segments;
  double permeability = media::kVacuumPermeability;

  void validate() const;
  double total_mean_length() const;
  /// Copy with segment means (and variances, keeping each coefficient of variation)
  /// rescaled so the means sum to `distance`.
  PathModel normalized(double distance) const;
  /// Segments of `other` appended after this path's.
  PathModel concatenated(const PathModel& other) const;
};

/// Per-segment 1/delta_i(f), the attenuation in nepers per meter.
std::vector<double> inverse_skin_depths(const PathModel& path, double frequency);

/// ln G ~ N(-sum E_i / delta_i, sum D_i / delta_i^2): the lognormal eddy-loss law.
LognormalParams gain_log_params(const PathModel& path, double frequency);

struct ChannelLogParams {
  LognormalParams amplitude;  // ln |H|
  double phase = 0.0;         // arg H, independent of the eddy loss
  LognormalParams power;      // ln |H|^2
};

ChannelLogParams channel_log_params(const PathModel& path, double frequency,
                                    const circuit::DeterministicGain& deterministic);

/// One length per segment. Throws SamplingError when truncated-normal rejection
/// runs past its budget.
std::vector<double> sample_path_lengths(const PathModel& path, random::Stream& stream);
/// Allocation-free form; `out` must hold one entry per segment.
void sample_path_lengths(const PathModel& path, random::Stream& stream, std::span<double> out);
std::vector<double> sample_path_lengths(const PathModel& path, std::uint64_t seed,
                                        random::StreamId id = {});

/// Exact product form G = exp(-sum dr_i / delta_i).
double sample_gain(const PathModel& path, double frequency, std::span<const double> lengths);
double gain_from_lengths(std::span<const double> inverse_depths, std::span<const double> lengths);

/// Cov(ln G(f1), ln G(f2)) = sum D_i / (delta_i(f1) delta_i(f2)) for shared lengths.
double cross_band_covariance(const PathModel& path, double f1, double f2);
double cross_band_correlation(const PathModel& path, double f1, double f2);

enum class SamplingMode { shared_path, independent_per_band };

std::string_view to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(std::string_view text);

/// |H(f_n)|^2 samples, indexed [band][sample]. `log_power_offsets[n]` is the
/// deterministic ln|H|^2 part for band n. Draw i of band n uses stream
/// (link, kAllBands, i) in shared mode or (link, n, i) otherwise.
std::vector<std::vector<double>> sample_channel_matrix(const PathModel& path,
                                                       std::span<const double> frequencies,
                                                       std::span<const double> log_power_offsets,
                                                       SamplingMode mode, std::uint64_t seed,
                                                       std::size_t count, std::uint32_t link = 0);

}  // namespace mifade::fading
