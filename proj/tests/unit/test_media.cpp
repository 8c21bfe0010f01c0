#include <doctest.h>

#include "helpers.hpp"
#include "mifade/error.hpp"
#include "mifade/media.hpp"
#include "oracle_values.hpp"

using namespace mifade;
namespace oracle = mifade::test::oracle;
using test::rel_diff;

namespace {
constexpr double kF = 50e3;
const media::MediumCatalog& catalog() { return media::builtin_catalog(); }
double depth(std::string_view name, double f = kF) {
  return media::skin_depth(catalog().at(name), f, catalog().permeability()).meters;
}
}  // namespace

TEST_CASE("general skin depth matches high-precision values for poor conductors") {
  CHECK(rel_diff(depth("soil"), oracle::kSkinDepthSoil) < 1e-12);
  CHECK(rel_diff(depth("water"), oracle::kSkinDepthWater) < 1e-12);
  CHECK(rel_diff(depth("concrete"), oracle::kSkinDepthConcrete) < 1e-12);
  CHECK(rel_diff(depth("air"), oracle::kSkinDepthAir) < 1e-12);
}

TEST_CASE("air reaches the low-loss limit without cancellation") {
  CHECK(rel_diff(depth("air"), oracle::kSkinDepthAirLowLoss) < 1e-6);
}

TEST_CASE("general form converges to the good-conductor form at high loss") {
  media::Medium m{"dense", 1.0, 1e9, media::ConductorClass::general};
  const double mu = media::kVacuumPermeability;
  CHECK(rel_diff(media::skin_depth_general(m, kF, mu), media::skin_depth_good_conductor(m, kF, mu)) < 1e-9);
}

TEST_CASE("good-conductor skin depth") {
  CHECK(rel_diff(depth("copper"), oracle::kSkinDepthCopper) < 1e-13);
  CHECK(rel_diff(depth("lead"), oracle::kSkinDepthLead) < 1e-13);
  CHECK(rel_diff(depth("silver"), oracle::kSkinDepthSilver) < 1e-13);
  CHECK(depth("copper") == doctest::Approx(2.955e-4).epsilon(1e-3));
  CHECK(rel_diff(depth("copper", 4 * kF), depth("copper") / 2) < 1e-14);
  CHECK(depth("silver") < depth("copper"));
}

TEST_CASE("formula dispatch follows the declared class") {
  const double mu = catalog().permeability();
  CHECK(media::skin_depth(catalog().at("copper"), kF, mu).formula == media::ConductorClass::good_conductor);
  CHECK(media::skin_depth(catalog().at("soil"), kF, mu).formula == media::ConductorClass::general);
  CHECK_THROWS_AS(media::parse_conductor_class("semiconductor"), ConfigError);
  CHECK(media::parse_conductor_class("good_conductor") == media::ConductorClass::good_conductor);
}

TEST_CASE("builtin catalog has thirteen unique materials") {
  CHECK(catalog().entries().size() == 13);
  CHECK(catalog().find("titanium") != nullptr);
  CHECK(catalog().find("unobtainium") == nullptr);
  CHECK_THROWS_AS(catalog().at("unobtainium"), ConfigError);
  auto copy = catalog();
  CHECK_THROWS(copy.add(catalog().at("soil")));
}

TEST_CASE("medium validation") {
  media::Medium bad{"negative", 1.0, -1.0, media::ConductorClass::general};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  media::Medium eps{"eps", 0.0, 1.0, media::ConductorClass::general};
  CHECK_THROWS_AS(eps.validate(), ValidationError);
  CHECK_THROWS_AS(media::skin_depth(catalog().at("soil"), -1.0, catalog().permeability()), DomainError);
}

TEST_CASE("catalog JSON round trip") {
  const auto text = media::serialize_catalog(catalog());
  const auto back = media::parse_catalog(text);
  REQUIRE(back.entries().size() == catalog().entries().size());
  for (std::size_t i = 0; i < back.entries().size(); ++i) {
    CHECK(back.entries()[i].name == catalog().entries()[i].name);
    CHECK(back.entries()[i].conductivity == catalog().entries()[i].conductivity);
    CHECK(back.entries()[i].conductor_class == catalog().entries()[i].conductor_class);
  }
  CHECK(back.permeability() == catalog().permeability());
  CHECK(media::serialize_catalog(back) == text);
}

TEST_CASE("catalog parse errors name the offending key") {
  try {
    media::parse_catalog(R"({"schema_version": 1, "media": [{"name": "x", "relative_permittivity": 1}]})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path().find("/media/0") == 0);
  }
  CHECK_THROWS_AS(media::parse_catalog(R"({"schema_version": 7, "media": []})"), ConfigError);
  CHECK_THROWS_AS(media::parse_catalog("not json"), ConfigError);
}
