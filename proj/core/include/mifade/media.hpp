#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mifade::media {

inline constexpr double kVacuumPermeability = 4.0e-7 * 3.14159265358979323846;  // H/m
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;                 // F/m

/// Which skin-depth formula a medium uses. Assigned per material, never inferred.
enum class ConductorClass { general, good_conductor };

std::string_view to_string(ConductorClass cls);
/// Throws ConfigError for anything other than "general" / "good_conductor".
ConductorClass parse_conductor_class(std::string_view text);

struct Medium {
  std::string name;
  double relative_permittivity = 1.0;
  double conductivity = 0.0;  // S/m
  ConductorClass conductor_class = ConductorClass::general;

  double permittivity() const { return relative_permittivity * kVacuumPermittivity; }
  /// sigma / (2 pi f epsilon)
  double loss_tangent(double frequency) const;
  /// Throws ValidationError when a field or the good-conductor guard is violated.
  void validate() const;
};

class MediumCatalog {
 public:
  MediumCatalog() = default;
  MediumCatalog(std::vector<Medium> entries, double permeability = kVacuumPermeability);

  const std::vector<Medium>& entries() const { return entries_; }
  double permeability() const { return permeability_; }

  const Medium* find(std::string_view name) const;
  /// Throws ConfigError when the name is not in the catalog.
  const Medium& at(std::string_view name) const;
  /// Appends a medium; names must stay unique.
  void add(Medium medium);

 private:
  std::vector<Medium> entries_;
  double permeability_ = kVacuumPermeability;
};

/// The thirteen built-in materials with their frozen constants.
const MediumCatalog& builtin_catalog();

inline constexpr int kCatalogSchemaVersion = 1;

/// Catalog file I/O (JSON, schema version 1).
MediumCatalog load_catalog(const std::filesystem::path& path);
MediumCatalog parse_catalog(std::string_view json_text);
std::string serialize_catalog(const MediumCatalog& catalog);

// ---------------------------------------------------------------------------
// Skin depth
// ---------------------------------------------------------------------------

/// Exact lossy-dielectric skin depth
///   delta = 1 / (w sqrt(mu eps / 2 (sqrt(1 + (sigma / (w eps))^2) - 1))),  w = 2 pi f.
/// The inner sqrt(1 + x^2) - 1 is evaluated as x^2 / (sqrt(1 + x^2) + 1) so the
/// low-loss limit (air) does not cancel to zero.
double skin_depth_general(const Medium& medium, double frequency, double permeability);

/// delta = (pi f mu sigma)^(-1/2)
double skin_depth_good_conductor(const Medium& medium, double frequency, double permeability);

struct SkinDepth {
  double meters = 0.0;
  ConductorClass formula = ConductorClass::general;  // branch that produced the value
};

/// Dispatches on medium.conductor_class.
SkinDepth skin_depth(const Medium& medium, double frequency, double permeability);

}  // namespace mifade::media
