#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mifade/circuit.hpp"
#include "mifade/fading.hpp"
#include "mifade/media.hpp"

namespace mifade::scenario {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr double kDefaultWireRadius = 1e-3;  // m

/// One transmitter-to-user link: coil geometry plus the random medium path.
struct LinkConfig {
  circuit::LinkGeometry geometry;
  fading::PathModel path;
  bool normalize_path = false;  // path means were rescaled to sum to the distance
};

struct BudgetConfig {
  double transmit_power = 0.0;  // W, the EAP budget P_t
  double noise_density = 0.0;   // W/Hz, N_0
  /// Explicit P_{k,n} [user][band]; when absent every entry gets the equal split.
  std::optional<std::vector<std::vector<double>>> band_powers;
};

struct AnalysisConfig {
  std::string modulation = "bpsk";
  double gamma_th = 20.0;  // linear SNR threshold
  int hermite_order = 500;
};

struct SimulationDefaults {
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  fading::SamplingMode sampling_mode = fading::SamplingMode::independent_per_band;
};

struct Scenario {
  std::string name;
  media::MediumCatalog catalog;
  circuit::CoilSpec transmitter;
  /// User k uses links[k % links.size()], so one entry describes identical users.
  std::vector<LinkConfig> links;
  circuit::BandPlan bands;  // carries the user count K+1
  BudgetConfig budget;
  AnalysisConfig analysis;
  SimulationDefaults simulation;

  double permeability() const { return catalog.permeability(); }
  std::size_t num_users() const { return static_cast<std::size_t>(bands.num_users); }
  std::size_t num_bands() const { return bands.num_bands(); }
  const LinkConfig& link_for_user(std::size_t user) const { return links[user % links.size()]; }
  /// Throws ValidationError on any broken invariant.
  void validate() const;
  /// Copy with another band plan and user count (figure presets).
  Scenario with_bands(circuit::BandPlan plan) const;
};

/// JSON scenario, schema version 1. Errors are ConfigError with a JSON-pointer
/// path ("/links/0/path/3/mean_length").
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& scenario);

/// $MIFADE_SCENARIO_DIR when set, otherwise the directory compiled into the library.
std::filesystem::path default_scenario_dir();
/// An existing file path is returned as is; otherwise `name` or `name.json` is
/// looked up in default_scenario_dir(). Throws ConfigError when nothing matches.
std::filesystem::path resolve_scenario(std::string_view name_or_path);

inline constexpr std::string_view kDefaultScenarioName = "paper-v";

}  // namespace mifade::scenario
