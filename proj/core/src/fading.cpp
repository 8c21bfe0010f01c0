#include "mifade/fading.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mifade/error.hpp"

namespace mifade::fading {

namespace {

constexpr int kTruncatedNormalBudget = 1000;

double draw_length(const PathSegment& seg, random::Stream& stream) {
  const double mean = seg.mean_length;
  const double sd = std::sqrt(seg.length_variance);
  if (sd == 0.0) return mean;
  switch (seg.distribution) {
    case LengthDistribution::uniform: {
      const double half_width = std::sqrt(3.0) * sd;
      return mean + half_width * (2.0 * stream.uniform() - 1.0);
    }
    case LengthDistribution::gaussian_truncated:
      for (int attempt = 0; attempt < kTruncatedNormalBudget; ++attempt) {
        const double x = mean + sd * stream.normal();
        if (x > 0.0) return x;
      }
      throw SamplingError(fmt::format(
          "truncated normal for segment '{}' rejected {} draws", seg.medium.name, kTruncatedNormalBudget));
    case LengthDistribution::exponential:
      return mean - sd - sd * std::log(stream.uniform());
  }
  throw DomainError("unknown length distribution");
}

}  // namespace

std::string_view to_string(LengthDistribution d) {
  switch (d) {
    case LengthDistribution::uniform:
      return "uniform";
    case LengthDistribution::gaussian_truncated:
      return "gaussian_truncated";
    case LengthDistribution::exponential:
      return "exponential";
  }
  return "?";
}

LengthDistribution parse_length_distribution(std::string_view text) {
  if (text == "uniform") return LengthDistribution::uniform;
  if (text == "gaussian_truncated") return LengthDistribution::gaussian_truncated;
  if (text == "exponential") return LengthDistribution::exponential;
  throw ConfigError("", fmt::format("unknown length distribution '{}'", text));
}

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::shared_path ? "shared_path" : "independent_per_band";
}

SamplingMode parse_sampling_mode(std::string_view text) {
  if (text == "shared_path") return SamplingMode::shared_path;
  if (text == "independent_per_band") return SamplingMode::independent_per_band;
  throw ConfigError("", fmt::format("unknown sampling mode '{}' (shared_path|independent_per_band)", text));
}

void PathSegment::validate() const {
  if (!(mean_length > 0.0)) {
    throw ValidationError(fmt::format("segment '{}': mean length must be > 0", medium.name));
  }
  if (!(length_variance >= 0.0)) {
    throw ValidationError(fmt::format("segment '{}': length variance must be >= 0", medium.name));
  }
  const double sd = std::sqrt(length_variance);
  if (distribution == LengthDistribution::uniform && !(std::sqrt(3.0) * sd < mean_length)) {
    throw ValidationError(fmt::format(
        "segment '{}': uniform half-width sqrt(3 D) must stay below the mean", medium.name));
  }
  if (distribution == LengthDistribution::exponential && !(sd <= mean_length)) {
    throw ValidationError(fmt::format(
        "segment '{}': shifted exponential needs sqrt(D) <= mean", medium.name));
  }
}

void PathModel::validate() const {
  if (segments.empty()) throw ValidationError("path needs at least one segment");
  if (!(permeability > 0.0)) throw ValidationError("path permeability must be > 0");
  for (const auto& s : segments) s.validate();
}

double PathModel::total_mean_length() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.mean_length;
  return total;
}

PathModel PathModel::normalized(double distance) const {
  if (!(distance > 0.0)) throw DomainError("normalization distance must be > 0");
  const double total = total_mean_length();
  if (!(total > 0.0)) throw DomainError("cannot normalize a path with zero total length");
  const double scale = distance / total;
  PathModel out = *this;
  for (auto& s : out.segments) {
    s.mean_length *= scale;
    s.length_variance *= scale * scale;
  }
  return out;
}

PathModel PathModel::concatenated(const PathModel& other) const {
  PathModel out = *this;
  out.segments.insert(out.segments.end(), other.segments.begin(), other.segments.end());
  return out;
}

std::vector<double> inverse_skin_depths(const PathModel& path, double frequency) {
  std::vector<double> inv;
  inv.reserve(path.segments.size());
  for (const auto& s : path.segments) {
    inv.push_back(1.0 / media::skin_depth(s.medium, frequency, path.permeability).meters);
  }
  return inv;
}

LognormalParams gain_log_params(const PathModel& path, double frequency) {
  LognormalParams p;
  const auto inv = inverse_skin_depths(path, frequency);
  for (std::size_t i = 0; i < inv.size(); ++i) {
    p.mu -= path.segments[i].mean_length * inv[i];
    p.sigma2 += path.segments[i].length_variance * inv[i] * inv[i];
  }
  return p;
}

ChannelLogParams channel_log_params(const PathModel& path, double frequency,
                                    const circuit::DeterministicGain& deterministic) {
  const auto g = gain_log_params(path, frequency);
  ChannelLogParams out;
  out.amplitude = {deterministic.log_amplitude + g.mu, g.sigma2};
  out.phase = deterministic.phase;
  out.power = {deterministic.log_power + 2.0 * g.mu, 4.0 * g.sigma2};
  return out;
}

void sample_path_lengths(const PathModel& path, random::Stream& stream, std::span<double> out) {
  if (out.size() != path.segments.size()) throw DomainError("one output slot per segment is required");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = draw_length(path.segments[i], stream);
}

std::vector<double> sample_path_lengths(const PathModel& path, random::Stream& stream) {
  std::vector<double> lengths(path.segments.size());
  sample_path_lengths(path, stream, lengths);
  return lengths;
}

std::vector<double> sample_path_lengths(const PathModel& path, std::uint64_t seed,
                                        random::StreamId id) {
  random::Stream stream(seed, id);
  return sample_path_lengths(path, stream);
}

double gain_from_lengths(std::span<const double> inverse_depths, std::span<const double> lengths) {
  if (inverse_depths.size() != lengths.size()) {
    throw DomainError("one length per segment is required");
  }
  double exponent = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) exponent -= lengths[i] * inverse_depths[i];
  return std::exp(exponent);
}

double sample_gain(const PathModel& path, double frequency, std::span<const double> lengths) {
  const auto inv = inverse_skin_depths(path, frequency);
  return gain_from_lengths(inv, lengths);
}

double cross_band_covariance(const PathModel& path, double f1, double f2) {
  const auto a = inverse_skin_depths(path, f1);
  const auto b = inverse_skin_depths(path, f2);
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += path.segments[i].length_variance * a[i] * b[i];
  return cov;
}

double cross_band_correlation(const PathModel& path, double f1, double f2) {
  const double v1 = gain_log_params(path, f1).sigma2;
  const double v2 = gain_log_params(path, f2).sigma2;
  if (v1 == 0.0 || v2 == 0.0) return 0.0;
  return cross_band_covariance(path, f1, f2) / std::sqrt(v1 * v2);
}

std::vector<std::vector<double>> sample_channel_matrix(const PathModel& path,
                                                       std::span<const double> frequencies,
                                                       std::span<const double> log_power_offsets,
                                                       SamplingMode mode, std::uint64_t seed,
                                                       std::size_t count, std::uint32_t link) {
  if (frequencies.size() != log_power_offsets.size()) {
    throw DomainError("one deterministic log-power offset per band is required");
  }
  std::vector<std::vector<double>> inv;
  inv.reserve(frequencies.size());
  for (double f : frequencies) inv.push_back(inverse_skin_depths(path, f));

  std::vector<std::vector<double>> out(frequencies.size(), std::vector<double>(count));
  for (std::size_t i = 0; i < count; ++i) {
    if (mode == SamplingMode::shared_path) {
      random::Stream stream(seed, {link, random::kAllBands, i});
      const auto lengths = sample_path_lengths(path, stream);
      for (std::size_t n = 0; n < frequencies.size(); ++n) {
        const double g = gain_from_lengths(inv[n], lengths);
        out[n][i] = std::exp(log_power_offsets[n]) * g * g;
      }
    } else {
      for (std::size_t n = 0; n < frequencies.size(); ++n) {
        random::Stream stream(seed, {link, static_cast<std::uint32_t>(n), i});
        const auto lengths = sample_path_lengths(path, stream);
        const double g = gain_from_lengths(inv[n], lengths);
        out[n][i] = std::exp(log_power_offsets[n]) * g * g;
      }
    }
  }
  return out;
}

}  // namespace mifade::fading
