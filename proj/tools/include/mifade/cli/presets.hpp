#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mifade/circuit.hpp"
#include "mifade/scenario.hpp"

namespace mifade::cli {

inline constexpr std::uint64_t kDefaultScenarioSeed = 20251015;
inline constexpr double kDefaultTotalBandwidth = 1000.0;  // Hz
inline constexpr double kDefaultCenter = 50e3;            // Hz

/// The committed default scenario: 50 uniform segments whose media are drawn
/// from the 13-material catalog, means summing to 20 m, D_i = (0.1 E_i)^2.
/// Metal segments share a fixed budget of mean attenuation at 50 kHz; the
/// poor conductors fill the remaining length. gamma_th is set to the median
/// single-band SNR so the default outage sits at 1/2.
scenario::Scenario generate_default_scenario(std::uint64_t seed = kDefaultScenarioSeed);

/// 1, 2, 4 or 8 bands splitting 1 kHz: {50}, {40, 60}, {35, ..., 65}, {32.5, ..., 67.5} kHz.
circuit::BandPlan band_count_plan(int bands, int users);
/// Two 500 Hz bands at 50 -/+ delta_f / 2 kHz.
circuit::BandPlan frequency_gap_plan(double delta_f, int users);

struct Curve {
  std::string name;                  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct FigureOptions {
  std::size_t samples = 100000;  // fig3 only
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct Figure {
  std::string id;
  std::string title;
  std::vector<Curve> curves;
};

const std::vector<std::string>& figure_ids();
/// Throws ConfigError listing the valid ids for anything else.
Figure compute_figure(std::string_view id, const scenario::Scenario& base, const FigureOptions& options);

}  // namespace mifade::cli
