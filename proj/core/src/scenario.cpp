#include "mifade/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mifade/analytics.hpp"
#include "mifade/error.hpp"
#include "mifade/numerics/quadrature.hpp"

#ifndef MIFADE_DEFAULT_SCENARIO_DIR
#define MIFADE_DEFAULT_SCENARIO_DIR "scenarios"
#endif

namespace mifade::scenario {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double from_db(double db) { return std::pow(10.0, db / 10.0); }

// A JSON value plus its pointer path, so every error names its location.
class Node {
 public:
  Node(const json& value, std::string path) : value_(&value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *value_; }

  bool has(const char* key) const { return value_->contains(key); }

  Node at(const char* key) const {
    if (!value_->contains(key)) throw ConfigError(child_path(key), "missing required key");
    return {(*value_)[key], child_path(key)};
  }

  Node operator[](std::size_t i) const { return {(*value_)[i], fmt::format("{}/{}", path_, i)}; }

  Node& object(std::initializer_list<const char*> allowed) {
    if (!value_->is_object()) throw ConfigError(path_or_root(), "must be an object");
    for (const auto& item : value_->items()) {
      bool known = false;
      for (const char* k : allowed) known = known || item.key() == k;
      if (!known) throw ConfigError(child_path(item.key().c_str()), "unknown key");
    }
    return *this;
  }

  std::size_t array_size() const {
    if (!value_->is_array()) throw ConfigError(path_or_root(), "must be an array");
    return value_->size();
  }

  double number() const {
    if (!value_->is_number()) throw ConfigError(path_or_root(), "must be a number");
    return value_->get<double>();
  }

  std::int64_t integer() const {
    if (!value_->is_number_integer()) throw ConfigError(path_or_root(), "must be an integer");
    return value_->get<std::int64_t>();
  }

  std::uint64_t unsigned_integer() const {
    if (!value_->is_number_unsigned()) throw ConfigError(path_or_root(), "must be a non-negative integer");
    return value_->get<std::uint64_t>();
  }

  bool boolean() const {
    if (!value_->is_boolean()) throw ConfigError(path_or_root(), "must be true or false");
    return value_->get<bool>();
  }

  std::string string() const {
    if (!value_->is_string()) throw ConfigError(path_or_root(), "must be a string");
    return value_->get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out(array_size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i].number();
    return out;
  }

  // Re-raises enum parse errors at this node's location.
  template <typename F>
  auto parse_enum(F&& parse) const {
    const auto text = string();
    try {
      return parse(text);
    } catch (const ConfigError& e) {
      throw ConfigError(path_, e.what());
    }
  }

 private:
  std::string child_path(const char* key) const { return fmt::format("{}/{}", path_, key); }
  std::string path_or_root() const { return path_.empty() ? "/" : path_; }

  const json* value_;
  std::string path_;
};

circuit::CoilSpec parse_coil(Node node, circuit::Side side, double permeability) {
  node.object({"radius", "turns", "self_resistance", "base_self_inductance", "wire_radius", "load_resistance"});
  circuit::CoilSpec coil;
  coil.radius = node.at("radius").number();
  const auto turns = node.at("turns").integer();
  if (turns < 1 || turns > 1000000) throw ConfigError(node.at("turns").path(), "must be in [1, 1e6]");
  coil.turns = static_cast<int>(turns);
  coil.self_resistance = node.at("self_resistance").number();
  if (node.has("base_self_inductance")) {
    coil.base_self_inductance = node.at("base_self_inductance").number();
  } else {
    const double wire = node.has("wire_radius") ? node.at("wire_radius").number() : kDefaultWireRadius;
    try {
      coil.base_self_inductance = circuit::loop_self_inductance(coil.radius, coil.turns, wire, permeability);
    } catch (const DomainError& e) {
      throw ConfigError(node.path(), e.what());
    }
  }
  if (side == circuit::Side::receive) {
    coil.load_resistance =
        node.has("load_resistance") ? node.at("load_resistance").number() : coil.self_resistance;
  } else if (node.has("load_resistance")) {
    throw ConfigError(node.at("load_resistance").path(), "the transmitter has no load resistance");
  }
  return coil;
}

fading::PathSegment parse_segment(Node node, const media::MediumCatalog& catalog) {
  node.object({"medium", "mean_length", "length_variance", "distribution"});
  fading::PathSegment seg;
  const auto medium = node.at("medium");
  try {
    seg.medium = catalog.at(medium.string());
  } catch (const ConfigError& e) {
    throw ConfigError(medium.path(), e.what());
  }
  seg.mean_length = node.at("mean_length").number();
  seg.length_variance = node.at("length_variance").number();
  if (node.has("distribution")) {
    seg.distribution = node.at("distribution").parse_enum(fading::parse_length_distribution);
  }
  return seg;
}

circuit::Matrix3 parse_matrix(Node node) {
  if (node.array_size() != 3) throw ConfigError(node.path(), "must be a 3x3 array");
  circuit::Matrix3 m{};
  for (std::size_t p = 0; p < 3; ++p) {
    const auto row = node[p];
    if (row.array_size() != 3) throw ConfigError(row.path(), "must have 3 entries");
    for (std::size_t q = 0; q < 3; ++q) m[p][q] = row[q].number();
  }
  return m;
}

LinkConfig parse_link(Node node, const media::MediumCatalog& catalog) {
  node.object({"receiver", "distance", "misalignment", "eddy_free", "normalize_path", "path"});
  LinkConfig link;
  link.geometry.receiver = parse_coil(node.at("receiver"), circuit::Side::receive, catalog.permeability());
  link.geometry.distance = node.at("distance").number();
  link.geometry.misalignment =
      node.has("misalignment") ? parse_matrix(node.at("misalignment")) : circuit::identity_misalignment();
  link.geometry.eddy_free = node.has("eddy_free") && node.at("eddy_free").boolean();
  link.normalize_path = node.has("normalize_path") && node.at("normalize_path").boolean();
  link.path.permeability = catalog.permeability();
  const auto path = node.at("path");
  const auto count = path.array_size();
  if (count == 0) throw ConfigError(path.path(), "needs at least one segment");
  for (std::size_t i = 0; i < count; ++i) link.path.segments.push_back(parse_segment(path[i], catalog));
  if (link.normalize_path) {
    try {
      link.path = link.path.normalized(link.geometry.distance);
    } catch (const DomainError& e) {
      throw ConfigError(node.at("normalize_path").path(), e.what());
    }
  }
  return link;
}

circuit::BandPlan parse_bands(Node node, int num_users) {
  node.object({"centers", "bandwidths", "total_bandwidth"});
  circuit::BandPlan plan;
  plan.centers = node.at("centers").numbers();
  plan.num_users = num_users;
  if (node.has("bandwidths") == node.has("total_bandwidth")) {
    throw ConfigError(node.path(), "give exactly one of 'bandwidths' or 'total_bandwidth'");
  }
  if (node.has("bandwidths")) {
    plan.bandwidths = node.at("bandwidths").numbers();
  } else {
    const double total = node.at("total_bandwidth").number();
    plan.bandwidths.assign(plan.centers.size(), total / static_cast<double>(std::max<std::size_t>(1, plan.centers.size())));
  }
  return plan;
}

BudgetConfig parse_budget(Node node) {
  node.object({"transmit_power_w", "transmit_power_dbw", "noise_density_w_per_hz", "noise_density_dbw_per_hz",
               "band_powers_w"});
  BudgetConfig budget;
  const auto pick = [&](const char* linear, const char* db) {
    if (node.has(linear) == node.has(db)) {
      throw ConfigError(node.path(), fmt::format("give exactly one of '{}' or '{}'", linear, db));
    }
    return node.has(linear) ? node.at(linear).number() : from_db(node.at(db).number());
  };
  budget.transmit_power = pick("transmit_power_w", "transmit_power_dbw");
  budget.noise_density = pick("noise_density_w_per_hz", "noise_density_dbw_per_hz");
  if (node.has("band_powers_w")) {
    const auto rows = node.at("band_powers_w");
    std::vector<std::vector<double>> powers(rows.array_size());
    for (std::size_t k = 0; k < powers.size(); ++k) powers[k] = rows[k].numbers();
    budget.band_powers = std::move(powers);
  }
  return budget;
}

AnalysisConfig parse_analysis(Node node) {
  node.object({"modulation", "gamma_th", "gamma_th_db", "hermite_order"});
  AnalysisConfig out;
  if (node.has("modulation")) {
    const auto m = node.at("modulation");
    try {
      out.modulation = analytics::find_modulation(m.string()).name;
    } catch (const ConfigError& e) {
      throw ConfigError(m.path(), e.what());
    }
  }
  if (node.has("gamma_th") && node.has("gamma_th_db")) {
    throw ConfigError(node.path(), "give at most one of 'gamma_th' or 'gamma_th_db'");
  }
  if (node.has("gamma_th")) out.gamma_th = node.at("gamma_th").number();
  if (node.has("gamma_th_db")) out.gamma_th = from_db(node.at("gamma_th_db").number());
  if (node.has("hermite_order")) out.hermite_order = static_cast<int>(node.at("hermite_order").integer());
  return out;
}

SimulationDefaults parse_simulation(Node node) {
  node.object({"seed", "samples", "sampling_mode"});
  SimulationDefaults out;
  if (node.has("seed")) out.seed = node.at("seed").unsigned_integer();
  if (node.has("samples")) out.samples = node.at("samples").unsigned_integer();
  if (node.has("sampling_mode")) out.sampling_mode = node.at("sampling_mode").parse_enum(fading::parse_sampling_mode);
  return out;
}

ordered_json coil_json(const circuit::CoilSpec& coil) {
  ordered_json j;
  j["radius"] = coil.radius;
  j["turns"] = coil.turns;
  j["self_resistance"] = coil.self_resistance;
  j["base_self_inductance"] = coil.base_self_inductance;
  if (coil.load_resistance) j["load_resistance"] = *coil.load_resistance;
  return j;
}

}  // namespace

void Scenario::validate() const {
  transmitter.validate(circuit::Side::transmit);
  if (links.empty()) throw ValidationError("scenario needs at least one link");
  for (std::size_t i = 0; i < links.size(); ++i) {
    try {
      links[i].geometry.validate();
      links[i].path.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("link {}: {}", i, e.what()));
    }
  }
  bands.validate();
  if (!(budget.transmit_power > 0.0)) throw ValidationError("transmit power must be > 0");
  if (!(budget.noise_density > 0.0)) throw ValidationError("noise density must be > 0");
  if (budget.band_powers) {
    const auto& p = *budget.band_powers;
    if (p.size() != num_users()) {
      throw ValidationError(fmt::format("band_powers_w needs {} user rows, got {}", num_users(), p.size()));
    }
    for (const auto& row : p) {
      if (row.size() != num_bands()) {
        throw ValidationError(fmt::format("band_powers_w rows need {} entries", num_bands()));
      }
      for (double v : row) {
        if (!(v > 0.0)) throw ValidationError("band powers must be > 0");
      }
    }
  }
  analytics::find_modulation(analysis.modulation);
  if (!(analysis.gamma_th > 0.0)) throw ValidationError("gamma_th must be > 0");
  if (analysis.hermite_order < 1 || analysis.hermite_order > numerics::kMaxHermiteOrder) {
    throw ValidationError(fmt::format("hermite_order must be in [1, {}]", numerics::kMaxHermiteOrder));
  }
}

Scenario Scenario::with_bands(circuit::BandPlan plan) const {
  Scenario out = *this;
  out.bands = std::move(plan);
  out.bands.validate();
  if (out.budget.band_powers &&
      (out.budget.band_powers->size() != out.num_users() ||
       out.budget.band_powers->front().size() != out.num_bands())) {
    out.budget.band_powers.reset();
  }
  return out;
}

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("scenario is not valid JSON: {}", e.what()));
  }
  Node root(doc, "");
  root.object({"schema_version", "name", "permeability", "media", "transmitter", "links", "num_users", "bands",
               "budget", "analysis", "simulation"});
  const auto version = root.at("schema_version").integer();
  if (version != kScenarioSchemaVersion) {
    throw ConfigError("/schema_version",
                      fmt::format("unsupported version {} (expected {})", version, kScenarioSchemaVersion));
  }

  Scenario s;
  s.name = root.has("name") ? root.at("name").string() : "unnamed";
  const double mu = root.has("permeability") ? root.at("permeability").number() : media::kVacuumPermeability;
  if (!(mu > 0.0)) throw ConfigError("/permeability", "must be > 0");
  s.catalog = media::MediumCatalog(media::builtin_catalog().entries(), mu);
  if (root.has("media")) {
    const auto extra = root.at("media");
    for (std::size_t i = 0; i < extra.array_size(); ++i) {
      auto rec = extra[i];
      rec.object({"name", "relative_permittivity", "conductivity", "conductor_class"});
      media::Medium m;
      m.name = rec.at("name").string();
      m.relative_permittivity = rec.at("relative_permittivity").number();
      m.conductivity = rec.at("conductivity").number();
      m.conductor_class = rec.at("conductor_class").parse_enum(media::parse_conductor_class);
      try {
        m.validate();
        s.catalog.add(std::move(m));
      } catch (const Error& e) {
        throw ConfigError(rec.path(), e.what());
      }
    }
  }

  s.transmitter = parse_coil(root.at("transmitter"), circuit::Side::transmit, mu);
  const auto links = root.at("links");
  const auto count = links.array_size();
  if (count == 0) throw ConfigError("/links", "needs at least one link");
  for (std::size_t i = 0; i < count; ++i) s.links.push_back(parse_link(links[i], s.catalog));

  const auto users = root.has("num_users") ? root.at("num_users").integer() : 1;
  if (users < 1 || users > 65535) throw ConfigError("/num_users", "must be in [1, 65535]");
  s.bands = parse_bands(root.at("bands"), static_cast<int>(users));
  s.budget = parse_budget(root.at("budget"));
  if (root.has("analysis")) s.analysis = parse_analysis(root.at("analysis"));
  if (root.has("simulation")) s.simulation = parse_simulation(root.at("simulation"));
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot open scenario '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& s) {
  ordered_json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["name"] = s.name;
  doc["permeability"] = s.permeability();

  auto extra = ordered_json::array();
  for (const auto& m : s.catalog.entries()) {
    if (media::builtin_catalog().find(m.name)) continue;
    extra.push_back({{"name", m.name},
                     {"relative_permittivity", m.relative_permittivity},
                     {"conductivity", m.conductivity},
                     {"conductor_class", std::string(media::to_string(m.conductor_class))}});
  }
  if (!extra.empty()) doc["media"] = std::move(extra);

  doc["transmitter"] = coil_json(s.transmitter);
  auto links = ordered_json::array();
  for (const auto& link : s.links) {
    ordered_json j;
    j["receiver"] = coil_json(link.geometry.receiver);
    j["distance"] = link.geometry.distance;
    j["misalignment"] = link.geometry.misalignment;
    if (link.geometry.eddy_free) j["eddy_free"] = true;
    auto path = ordered_json::array();
    for (const auto& seg : link.path.segments) {
      path.push_back({{"medium", seg.medium.name},
                      {"mean_length", seg.mean_length},
                      {"length_variance", seg.length_variance},
                      {"distribution", std::string(fading::to_string(seg.distribution))}});
    }
    j["path"] = std::move(path);
    links.push_back(std::move(j));
  }
  doc["links"] = std::move(links);
  doc["num_users"] = s.bands.num_users;
  doc["bands"] = {{"centers", s.bands.centers}, {"bandwidths", s.bands.bandwidths}};

  ordered_json budget;
  budget["transmit_power_w"] = s.budget.transmit_power;
  budget["noise_density_w_per_hz"] = s.budget.noise_density;
  if (s.budget.band_powers) budget["band_powers_w"] = *s.budget.band_powers;
  doc["budget"] = std::move(budget);
  doc["analysis"] = {{"modulation", s.analysis.modulation},
                     {"gamma_th", s.analysis.gamma_th},
                     {"hermite_order", s.analysis.hermite_order}};
  doc["simulation"] = {{"seed", s.simulation.seed},
                       {"samples", s.simulation.samples},
                       {"sampling_mode", std::string(fading::to_string(s.simulation.sampling_mode))}};
  return doc.dump(2) + "\n";
}

std::filesystem::path default_scenario_dir() {
  if (const char* env = std::getenv("MIFADE_SCENARIO_DIR"); env && *env) return env;
  return MIFADE_DEFAULT_SCENARIO_DIR;
}

std::filesystem::path resolve_scenario(std::string_view name_or_path) {
  const std::filesystem::path direct(name_or_path);
  if (std::filesystem::is_regular_file(direct)) return direct;
  const auto dir = default_scenario_dir();
  for (const auto& candidate : {dir / direct, dir / (std::string(name_or_path) + ".json")}) {
    if (std::filesystem::is_regular_file(candidate)) return candidate;
  }
  throw ConfigError("", fmt::format("scenario '{}' not found (looked in {})", name_or_path, dir.string()));
}

}  // namespace mifade::scenario
