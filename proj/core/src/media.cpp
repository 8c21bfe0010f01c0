#include "mifade/media.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mifade/error.hpp"

namespace mifade::media {

namespace {

void require_positive_frequency(double frequency) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw DomainError(fmt::format("skin depth needs a positive frequency, got {}", frequency));
  }
}

// Loss-tangent threshold (evaluated at 10 kHz) below which a material may not be
// declared a good conductor.
constexpr double kGoodConductorGuardFrequency = 1.0e4;
constexpr double kGoodConductorMinLossTangent = 1.0e3;

}  // namespace

std::string_view to_string(ConductorClass cls) {
  switch (cls) {
    case ConductorClass::general:
      return "general";
    case ConductorClass::good_conductor:
      return "good_conductor";
  }
  throw DomainError("unknown conductor class");
}

ConductorClass parse_conductor_class(std::string_view text) {
  if (text == "general") return ConductorClass::general;
  if (text == "good_conductor") return ConductorClass::good_conductor;
  throw ConfigError("", fmt::format("unknown conductor class '{}'", text));
}

double Medium::loss_tangent(double frequency) const {
  return conductivity / (2.0 * std::numbers::pi * frequency * permittivity());
}

void Medium::validate() const {
  if (name.empty()) throw ValidationError("medium name must not be empty");
  if (!(conductivity > 0.0)) {
    throw ValidationError(fmt::format("medium '{}': conductivity must be > 0", name));
  }
  if (!(relative_permittivity >= 1.0)) {
    throw ValidationError(fmt::format("medium '{}': relative permittivity must be >= 1", name));
  }
  if (conductor_class == ConductorClass::good_conductor &&
      !(loss_tangent(kGoodConductorGuardFrequency) > kGoodConductorMinLossTangent)) {
    throw ValidationError(fmt::format(
        "medium '{}' is marked good_conductor but its loss tangent at 10 kHz is {:.3g} (needs > 1e3)",
        name, loss_tangent(kGoodConductorGuardFrequency)));
  }
}

MediumCatalog::MediumCatalog(std::vector<Medium> entries, double permeability)
    : permeability_(permeability) {
  if (!(permeability > 0.0)) throw ValidationError("permeability must be > 0");
  for (auto& m : entries) add(std::move(m));
}

const Medium* MediumCatalog::find(std::string_view name) const {
  for (const auto& m : entries_) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const Medium& MediumCatalog::at(std::string_view name) const {
  if (const auto* m = find(name)) return *m;
  std::string known;
  for (const auto& m : entries_) known += (known.empty() ? "" : ", ") + m.name;
  throw ConfigError("", fmt::format("unknown medium '{}' (known: {})", name, known));
}

void MediumCatalog::add(Medium medium) {
  medium.validate();
  if (find(medium.name)) {
    throw ValidationError(fmt::format("duplicate medium name '{}'", medium.name));
  }
  entries_.push_back(std::move(medium));
}

const MediumCatalog& builtin_catalog() {
  using enum ConductorClass;
  static const MediumCatalog catalog(
      {
          {"soil", 5.0, 1.0e-6, general},
          {"water", 80.0, 5.0e-3, general},
          {"concrete", 4.0, 1.0e-5, general},
          {"wood", 2.0, 1.0e-8, general},
          {"air", 1.0, 3.0e-15, general},
          {"copper", 1.0, 5.8e7, good_conductor},
          {"aluminum", 1.0, 3.5e7, good_conductor},
          {"silver", 1.0, 6.3e7, good_conductor},
          {"gold", 1.0, 4.5e7, good_conductor},
          {"lead", 1.0, 5.0e6, good_conductor},
          {"zinc", 1.0, 1.6e7, good_conductor},
          {"tin", 1.0, 9.0e6, good_conductor},
          {"titanium", 1.0, 2.3e6, good_conductor},
      },
      kVacuumPermeability);
  return catalog;
}

MediumCatalog parse_catalog(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("catalog is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ConfigError("", "catalog root must be an object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer()) {
    throw ConfigError("/schema_version", "missing or not an integer");
  }
  if (doc["schema_version"].get<int>() != kCatalogSchemaVersion) {
    throw ConfigError("/schema_version",
                      fmt::format("unsupported version {}", doc["schema_version"].get<int>()));
  }
  double permeability = kVacuumPermeability;
  if (doc.contains("permeability")) {
    if (!doc["permeability"].is_number()) throw ConfigError("/permeability", "must be a number");
    permeability = doc["permeability"].get<double>();
  }
  if (!doc.contains("media") || !doc["media"].is_array()) {
    throw ConfigError("/media", "missing or not an array");
  }
  std::vector<Medium> entries;
  const auto& media = doc["media"];
  for (std::size_t i = 0; i < media.size(); ++i) {
    const auto base = fmt::format("/media/{}", i);
    const auto& rec = media[i];
    auto field = [&](const char* key) -> const json& {
      if (!rec.contains(key)) throw ConfigError(base + "/" + key, "missing");
      return rec[key];
    };
    Medium m;
    if (!field("name").is_string()) throw ConfigError(base + "/name", "must be a string");
    m.name = field("name").get<std::string>();
    if (!field("relative_permittivity").is_number()) {
      throw ConfigError(base + "/relative_permittivity", "must be a number");
    }
    m.relative_permittivity = field("relative_permittivity").get<double>();
    if (!field("conductivity").is_number()) throw ConfigError(base + "/conductivity", "must be a number");
    m.conductivity = field("conductivity").get<double>();
    if (!field("conductor_class").is_string()) {
      throw ConfigError(base + "/conductor_class", "must be a string");
    }
    try {
      m.conductor_class = parse_conductor_class(field("conductor_class").get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(base + "/conductor_class", e.what());
    }
    entries.push_back(std::move(m));
  }
  try {
    return MediumCatalog(std::move(entries), permeability);
  } catch (const ValidationError& e) {
    throw ConfigError("/media", e.what());
  }
}

MediumCatalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot open medium catalog '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_catalog(buffer.str());
}

std::string serialize_catalog(const MediumCatalog& catalog) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kCatalogSchemaVersion;
  doc["permeability"] = catalog.permeability();
  auto media = nlohmann::ordered_json::array();
  for (const auto& m : catalog.entries()) {
    nlohmann::ordered_json rec;
    rec["name"] = m.name;
    rec["relative_permittivity"] = m.relative_permittivity;
    rec["conductivity"] = m.conductivity;
    rec["conductor_class"] = std::string(to_string(m.conductor_class));
    media.push_back(std::move(rec));
  }
  doc["media"] = std::move(media);
  return doc.dump(2) + "\n";
}

double skin_depth_general(const Medium& medium, double frequency, double permeability) {
  require_positive_frequency(frequency);
  const double omega = 2.0 * std::numbers::pi * frequency;
  const double eps = medium.permittivity();
  const double x = medium.conductivity / (omega * eps);
  // sqrt(1 + x^2) - 1 without cancellation, and without forming x^2 for huge x.
  const double excess = x * (x / (std::hypot(1.0, x) + 1.0));
  return 1.0 / (omega * std::sqrt(permeability * eps / 2.0 * excess));
}

double skin_depth_good_conductor(const Medium& medium, double frequency, double permeability) {
  require_positive_frequency(frequency);
  return 1.0 / std::sqrt(std::numbers::pi * frequency * permeability * medium.conductivity);
}

SkinDepth skin_depth(const Medium& medium, double frequency, double permeability) {
  switch (medium.conductor_class) {
    case ConductorClass::general:
      return {skin_depth_general(medium, frequency, permeability), ConductorClass::general};
    case ConductorClass::good_conductor:
      return {skin_depth_good_conductor(medium, frequency, permeability),
              ConductorClass::good_conductor};
  }
  throw DomainError(fmt::format("medium '{}' has an unknown conductor class", medium.name));
}

}  // namespace mifade::media
