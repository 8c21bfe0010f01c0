#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "mifade/cli/app.hpp"
#include "mifade/cli/presets.hpp"
#include "mifade/csv.hpp"
#include "mifade/scenario.hpp"

using namespace mifade;
using json = nlohmann::json;
using test::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run mifade_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

/// Rows of a tidy CSV as string fields, header first, version line dropped.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::istringstream in(test::read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::runtime_error("missing column " + std::string(name));
}

std::string net_value(const std::filesystem::path& report, std::string_view name) {
  const auto rows = read_csv(report);
  const auto c = column(rows[0], name);
  for (const auto& r : rows) {
    if (r[0] == "net") return r[c];
  }
  throw std::runtime_error("no net row");
}

}  // namespace

TEST_CASE("media table rows") {
  TempDir dir("media");
  const auto r = mifade_run({"media", "--out-dir", dir.path().string()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir / "media.csv");
  const auto depth = column(rows[0], "skin_depth_m");
  for (const auto& row : rows) {
    if (row[0] == "copper") CHECK(std::stod(row[depth]) == doctest::Approx(2.955e-4).epsilon(1e-3));
    if (row[0] == "air") CHECK(std::stod(row[depth]) == doctest::Approx(1.77e12).epsilon(1e-3));
  }
  CHECK(test::read_file(dir / "media.csv").rfind("# mifade-csv v1 media\n", 0) == 0);
  const auto manifest = json::parse(test::read_file(dir / "manifest.json"));
  CHECK(manifest["command"] == "media");
  CHECK(manifest["status"] == "complete");
  CHECK(manifest["outputs"].size() == 2);
  CHECK(manifest["constants"].contains("hermite500_digest"));
}

TEST_CASE("skin depth sweep and unknown media") {
  TempDir dir("skin");
  auto r = mifade_run({"skin-depth", "--medium", "copper,soil", "--points", "5", "--out-dir", dir.path().string()});
  REQUIRE(r.code == 0);
  CHECK(read_csv(dir / "skin_depth.csv").size() == 11);
  r = mifade_run({"skin-depth", "--medium", "unobtainium", "--out-dir", dir.path().string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("unobtainium") != std::string::npos);
}

TEST_CASE("design emits a network and a sweep") {
  TempDir dir("design");
  auto r = mifade_run({"design", "--targets", "30000,40000,50000,60000,70000", "--out-dir", dir.path().string()});
  REQUIRE(r.code == 0);
  const auto net = json::parse(test::read_file(dir / "network.json"));
  CHECK(net["branches"].size() == 4);
  CHECK(net["max_relative_residual"].get<double>() < 1e-6);
  const auto sweep = read_csv(dir / "impedance_sweep.csv");
  CHECK(sweep[0] == std::vector<std::string>{"f_Hz", "re_Z_ohm", "im_Z_ohm", "abs_Z_ohm"});
  CHECK(sweep.size() > 3000);

  r = mifade_run({"design", "--targets", "50000", "--out-dir", dir.path().string()});
  REQUIRE(r.code == 0);
  const auto single = json::parse(test::read_file(dir / "network.json"));
  const double l0 = single["base_self_inductance_h"];
  const double c0 = 1.0 / (4 * std::numbers::pi * std::numbers::pi * 50000.0 * 50000.0 * l0);
  CHECK(single["series_capacitance_f"].get<double>() == doctest::Approx(c0).epsilon(1e-12));
  CHECK(single["branches"].empty());

  r = mifade_run({"design", "--targets", "40000,40000", "--out-dir", dir.path().string()});
  CHECK(r.code == cli::kExitValidation);
}

TEST_CASE("analyze: eight-band multiplexing beats one band") {
  TempDir one("an1"), eight("an8");
  REQUIRE(mifade_run({"analyze", "--bands", "1", "--out-dir", one.path().string()}).code == 0);
  REQUIRE(mifade_run({"analyze", "--bands", "8", "--out-dir", eight.path().string()}).code == 0);
  CHECK(std::stod(net_value(eight / "report.csv", "capacity_nat_s")) >
        std::stod(net_value(one / "report.csv", "capacity_nat_s")));
}

TEST_CASE("analyze: single band diversity equals multiplexing") {
  TempDir mux("mux"), div("div");
  REQUIRE(mifade_run({"analyze", "--bands", "1", "--users", "1", "--out-dir", mux.path().string()}).code == 0);
  REQUIRE(mifade_run({"analyze", "--bands", "1", "--users", "1", "--mode", "diversity", "--out-dir",
                      div.path().string()})
              .code == 0);
  for (const char* metric : {"capacity_nat_s", "ber", "outage"}) {
    const double a = std::stod(net_value(mux / "report.csv", metric));
    const double b = std::stod(net_value(div / "report.csv", metric));
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
  }
}

TEST_CASE("analyze: bit units divide by ln 2") {
  TempDir nat("nat"), bit("bit");
  REQUIRE(mifade_run({"analyze", "--out-dir", nat.path().string()}).code == 0);
  REQUIRE(mifade_run({"analyze", "--units", "bit", "--out-dir", bit.path().string()}).code == 0);
  CHECK(std::stod(net_value(bit / "report.csv", "capacity_bit_s")) ==
        doctest::Approx(std::stod(net_value(nat / "report.csv", "capacity_nat_s")) / std::numbers::ln2));
}

TEST_CASE("analyze: schema errors exit 2 with the key path") {
  TempDir dir("bad");
  auto doc = json::parse(test::read_file(scenario::resolve_scenario("paper-v")));
  doc["budget"].erase("noise_density_w_per_hz");
  const auto path = dir / "broken.json";
  {
    std::ofstream f(path);
    f << doc.dump();
  }
  const auto r = mifade_run({"analyze", "--config", path.string(), "--out-dir", (dir / "out").string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("/budget") != std::string::npos);
  CHECK(mifade_run({"analyze", "--bogus-flag"}).code == cli::kExitConfig);
}

TEST_CASE("simulate: default scenario passes and reruns are identical") {
  TempDir a("sim-a"), b("sim-b");
  REQUIRE(mifade_run({"simulate", "--samples", "100000", "--seed", "3", "--workers", "1", "--out-dir",
                      a.path().string()})
              .code == 0);
  REQUIRE(mifade_run({"simulate", "--samples", "100000", "--seed", "3", "--workers", "4", "--out-dir",
                      b.path().string()})
              .code == 0);
  const auto rows = read_csv(a / "comparison.csv");
  const auto status = column(rows[0], "status");
  int ks_rows = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][status] == "pass");
    if (rows[i][0] == "ks_log_snr") {
      ++ks_rows;
      CHECK(std::stod(rows[i][column(rows[0], "empirical")]) < 0.02);
    }
  }
  CHECK(ks_rows == 4);
  for (const char* f : {"comparison.csv", "summary.csv", "cdf.csv"}) CHECK(test::read_file(a / f) == test::read_file(b / f));
  const auto cdf = read_csv(a / "cdf.csv");
  CHECK(cdf[0] == std::vector<std::string>{"user", "band", "snr_linear", "empirical_cdf", "analytic_cdf"});
}

TEST_CASE("simulate: too few samples") {
  TempDir dir("few");
  const auto r = mifade_run({"simulate", "--samples", "500", "--out-dir", dir.path().string()});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("1000") != std::string::npos);
}

TEST_CASE("figure presets") {
  TempDir dir("fig");
  REQUIRE(mifade_run({"figure", "fig4", "--out-dir", dir.path().string()}).code == 0);
  const auto manifest = json::parse(test::read_file(dir / "manifest.json"));
  CHECK(manifest["outputs"].size() == 4);
  for (int bands : {1, 2, 4, 8}) CHECK(std::filesystem::exists(dir / ("fig4_bands_" + std::to_string(bands) + ".csv")));

  REQUIRE(mifade_run({"figure", "fig8", "--out-dir", dir.path().string()}).code == 0);
  const auto gap = read_csv(dir / "fig8_multiplexing_2band.csv");
  CHECK(std::stod(gap.back()[0]) == 40000.0);
  CHECK(std::stod(gap[1][0]) == 2000.0);

  const auto bad = mifade_run({"figure", "fig2", "--out-dir", dir.path().string()});
  CHECK(bad.code == cli::kExitConfig);
  CHECK(bad.err.find("fig3, fig4") != std::string::npos);
}

TEST_CASE("figure curve layout") {
  const auto base = scenario::load_scenario(scenario::resolve_scenario("paper-v"));
  cli::FigureOptions options;
  options.samples = 5000;
  const auto fig7 = cli::compute_figure("fig7", base, options);
  CHECK(fig7.curves.size() == 7);
  const auto fig3 = cli::compute_figure("fig3", base, options);
  REQUIRE(fig3.curves.size() == 1);
  CHECK(fig3.curves[0].columns == std::vector<std::string>{"snr_linear", "empirical_cdf", "analytic_cdf"});
  CHECK(cli::band_count_plan(8, 4).centers.front() == 32.5e3);
  CHECK(cli::band_count_plan(8, 4).centers.back() == 67.5e3);
  CHECK(cli::band_count_plan(8, 4).bandwidths[0] == 125.0);
  CHECK(cli::frequency_gap_plan(10e3, 1).centers == std::vector<double>{45e3, 55e3});
}

TEST_CASE("committed scenario and constants are regenerable") {
  const auto gen = mifade_run({"scenario-gen"});
  REQUIRE(gen.code == 0);
  CHECK(gen.out == test::read_file(scenario::resolve_scenario("paper-v")));
  const auto header = std::filesystem::path(MIFADE_SOURCE_DIR) / "core/include/mifade/numerics/generated_constants.hpp";
  const auto chk = mifade_run({"constants", "--check", header.string()});
  CHECK(chk.code == 0);
  TempDir dir("const");
  {
    std::ofstream f(dir / "stale.hpp");
    f << "// stale\n";
  }
  CHECK(mifade_run({"constants", "--check", (dir / "stale.hpp").string()}).code == cli::kExitValidation);
}

TEST_CASE("help and version exit cleanly") {
  CHECK(mifade_run({"--help"}).code == 0);
  const auto v = mifade_run({"--version"});
  CHECK(v.code == 0);
  CHECK(mifade_run({}).code == cli::kExitConfig);
}
