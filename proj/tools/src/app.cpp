#include "mifade/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "mifade/analytics.hpp"
#include "mifade/circuit.hpp"
#include "mifade/cli/presets.hpp"
#include "mifade/csv.hpp"
#include "mifade/error.hpp"
#include "mifade/media.hpp"
#include "mifade/montecarlo.hpp"
#include "mifade/numerics/constants_file.hpp"
#include "mifade/numerics/generated_constants.hpp"
#include "mifade/scenario.hpp"
#include "mifade/system.hpp"
#include "mifade/version.hpp"

namespace mifade::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum class Units { nat, bit };

struct CommonOptions {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string mode;
  std::optional<unsigned> workers;
  Units units = Units::nat;
};

struct PlanOptions {
  std::optional<int> bands;
  std::optional<int> users;
  std::optional<double> delta_f;
  std::optional<double> gamma_th_db;
  std::optional<double> power_dbw;
};

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

json constants_fingerprint() {
  namespace gen = numerics::generated;
  std::string coeffs;
  for (double a : gen::kCapacityCoefficients) coeffs += fmt::format("{};", a);
  return {
      {"capacity_coefficients_fnv1a", fmt::format("{:016x}", fnv1a(coeffs))},
      {"capacity_fit_max_error", gen::kCapacityFitMaxError},
      {"hermite20_digest", fmt::format("{:016x}", gen::kHermite20Digest)},
      {"hermite500_digest", fmt::format("{:016x}", gen::kHermite500Digest)},
  };
}

std::string utc_now() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now);
}

/// One output directory: the manifest goes in first, every file written
/// through it is listed, and finish() stamps the final status.
class OutputDir {
 public:
  OutputDir(fs::path dir, std::string command, const std::vector<std::string>& args, std::string config,
            std::optional<std::uint64_t> seed)
      : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    manifest_ = {
        {"command", std::move(command)},
        {"arguments", args},
        {"config", config.empty() ? json(nullptr) : json(config)},
        {"seed", seed ? json(*seed) : json(nullptr)},
        {"out_dir", dir_.string()},
        {"version", std::string(version())},
        {"constants", constants_fingerprint()},
        {"outputs", json::array()},
        {"status", "running"},
        {"timestamp", utc_now()},
    };
    flush();
  }

  const fs::path& path() const { return dir_; }

  void write(const std::string& name, const std::string& content) {
    std::ofstream file(dir_ / name, std::ios::binary | std::ios::trunc);
    file << content;
    if (!file) throw std::runtime_error(fmt::format("cannot write {}", (dir_ / name).string()));
    manifest_["outputs"].push_back(name);
  }

  void set(const std::string& key, json value) { manifest_[key] = std::move(value); }

  void finish() {
    manifest_["status"] = "complete";
    manifest_["timestamp"] = utc_now();
    flush();
  }

 private:
  void flush() {
    std::ofstream file(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    file << manifest_.dump(2) << '\n';
  }

  fs::path dir_;
  json manifest_;
};

std::string band_label(std::size_t band) {
  return band == analytics::kCombinedBand ? "combined" : std::to_string(band);
}

double capacity_scale(Units u) { return u == Units::bit ? 1.0 / std::numbers::ln2 : 1.0; }
std::string capacity_column(Units u) { return u == Units::bit ? "capacity_bit_s" : "capacity_nat_s"; }

scenario::Scenario load_config(const CommonOptions& common) {
  const std::string name = common.config.empty() ? std::string(scenario::kDefaultScenarioName) : common.config;
  return scenario::load_scenario(scenario::resolve_scenario(name));
}

scenario::Scenario apply_plan(scenario::Scenario s, const PlanOptions& plan) {
  const int users = plan.users.value_or(s.bands.num_users);
  if (plan.bands && plan.delta_f) throw ConfigError("", "--bands and --delta-f are mutually exclusive");
  if (plan.bands) {
    s = s.with_bands(band_count_plan(*plan.bands, users));
  } else if (plan.delta_f) {
    s = s.with_bands(frequency_gap_plan(*plan.delta_f, users));
  } else if (plan.users) {
    auto bands = s.bands;
    bands.num_users = users;
    s = s.with_bands(std::move(bands));
  }
  if (plan.gamma_th_db) s.analysis.gamma_th = std::pow(10.0, *plan.gamma_th_db / 10.0);
  if (plan.power_dbw) {
    s.budget.transmit_power = std::pow(10.0, *plan.power_dbw / 10.0);
    s.budget.band_powers.reset();
  }
  s.validate();
  return s;
}

std::vector<double> spaced(double start, double stop, int points, bool logarithmic) {
  if (points < 2) return {start};
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    out[static_cast<std::size_t>(i)] =
        logarithmic ? start * std::pow(stop / start, t) : start + (stop - start) * t;
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_media(const CommonOptions& common, double frequency, OutputDir& dir, std::ostream& out) {
  const auto sc = common.config.empty() ? std::optional<scenario::Scenario>{} : load_config(common);
  const auto& catalog = sc ? sc->catalog : media::builtin_catalog();
  std::ostringstream text;
  csv::Writer w(text, "media",
                {"medium", "relative_permittivity", "conductivity_s_per_m", "conductor_class", "frequency_hz",
                 "loss_tangent", "skin_depth_m"});
  for (const auto& m : catalog.entries()) {
    w.field(m.name)
        .field(m.relative_permittivity)
        .field(m.conductivity)
        .field(media::to_string(m.conductor_class))
        .field(frequency)
        .field(m.loss_tangent(frequency))
        .field(media::skin_depth(m, frequency, catalog.permeability()).meters);
    w.end_row();
  }
  dir.write("media.csv", text.str());
  dir.write("media.json", media::serialize_catalog(catalog));
  out << fmt::format("{} media -> {}\n", catalog.entries().size(), dir.path().string());
  return kExitSuccess;
}

int cmd_skin_depth(const CommonOptions& common, std::vector<std::string> names, double f_start, double f_stop,
                   int points, bool linear, OutputDir& dir, std::ostream& out) {
  const auto sc = common.config.empty() ? std::optional<scenario::Scenario>{} : load_config(common);
  const auto& catalog = sc ? sc->catalog : media::builtin_catalog();
  if (!(f_start > 0.0) || !(f_stop >= f_start)) throw ConfigError("", "need 0 < --f-start <= --f-stop");
  if (points < 1) throw ConfigError("", "--points must be positive");
  if (names.empty()) {
    for (const auto& m : catalog.entries()) names.push_back(m.name);
  }
  std::vector<const media::Medium*> selected;
  for (const auto& n : names) selected.push_back(&catalog.at(n));

  std::ostringstream text;
  csv::Writer w(text, "skin_depth", {"medium", "frequency_hz", "skin_depth_m", "formula"});
  const auto freqs = spaced(f_start, f_stop, points, !linear);
  for (const auto* m : selected) {
    for (double f : freqs) {
      const auto d = media::skin_depth(*m, f, catalog.permeability());
      w.field(m->name).field(f).field(d.meters).field(media::to_string(d.formula));
      w.end_row();
    }
  }
  dir.write("skin_depth.csv", text.str());
  out << fmt::format("{} rows -> {}\n", w.rows_written(), (dir.path() / "skin_depth.csv").string());
  return kExitSuccess;
}

int cmd_design(const CommonOptions& common, std::vector<double> targets, const std::string& side_name,
               std::optional<double> f_start, std::optional<double> f_stop, int points, OutputDir& dir,
               std::ostream& out) {
  const auto sc = load_config(common);
  if (targets.empty()) targets = sc.bands.centers;
  circuit::Side side;
  if (side_name == "transmit") {
    side = circuit::Side::transmit;
  } else if (side_name == "receive") {
    side = circuit::Side::receive;
  } else {
    throw ConfigError("", fmt::format("unknown side '{}' (valid: transmit, receive)", side_name));
  }
  const auto& coil = side == circuit::Side::transmit ? sc.transmitter : sc.links.front().geometry.receiver;
  const auto network = circuit::design_murec(targets, coil, side);
  const double residual = circuit::resonance_residual(coil, network, targets, side);

  json doc{
      {"side", side_name},
      {"targets_hz", targets},
      {"series_resistance_ohm", coil.series_resistance(side)},
      {"base_self_inductance_h", coil.base_self_inductance},
      {"series_capacitance_f", network.series_capacitance},
      {"branches", json::array()},
      {"max_relative_residual", residual},
  };
  for (const auto& b : network.branches) {
    doc["branches"].push_back(
        {{"inductance_h", b.inductance}, {"capacitance_f", b.capacitance}, {"pole_hz", b.pole_frequency()}});
  }
  dir.write("network.json", doc.dump(2) + "\n");

  const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
  const double start = f_start.value_or(*lo * 0.6);
  const double stop = f_stop.value_or(*hi * 1.4);
  const auto sweep = circuit::impedance_sweep(coil, network, side, start, stop, points);
  std::ostringstream text;
  csv::Writer w(text, "impedance_sweep", {"f_Hz", "re_Z_ohm", "im_Z_ohm", "abs_Z_ohm"});
  for (const auto& p : sweep) {
    w.field(p.frequency).field(p.impedance.real()).field(p.impedance.imag()).field(std::abs(p.impedance));
    w.end_row();
  }
  dir.write("impedance_sweep.csv", text.str());
  out << fmt::format("{} targets, {} tanks, residual {:.3g} R -> {}\n", targets.size(), network.branches.size(),
                     residual, dir.path().string());
  return kExitSuccess;
}

analytics::AnalysisMode parse_mode_or_default(const std::string& text) {
  return text.empty() ? analytics::AnalysisMode::multiplexing : analytics::parse_analysis_mode(text);
}

int cmd_analyze(const CommonOptions& common, const PlanOptions& plan, OutputDir& dir, std::ostream& out,
                std::ostream& err) {
  const auto sc = apply_plan(load_config(common), plan);
  const system::SystemModel model(sc);
  system::AnalysisOptions options;
  options.mode = parse_mode_or_default(common.mode);
  const auto result = system::analyze(model, options);
  for (std::size_t k = 0; k < result.matches.size(); ++k) {
    if (result.matches[k].degraded) {
      err << fmt::format("warning: user {} MGF match fell back to Fenton-Wilkinson (residual {:.3g})\n", k,
                         result.matches[k].residual);
    }
  }

  const auto& r = result.report;
  const double scale = capacity_scale(common.units);
  std::ostringstream text;
  csv::Writer w(text, "analyze",
                {"user", "band", "mode", "E_log", "D_log", capacity_column(common.units), "ber", "outage",
                 "gamma_th"});
  for (const auto& row : r.rows) {
    w.field(static_cast<std::uint64_t>(row.user))
        .field(band_label(row.band))
        .field(analytics::to_string(r.mode))
        .field(row.snr.mu)
        .field(row.snr.sigma2)
        .field(row.capacity * scale)
        .field(row.ber)
        .field(row.outage)
        .field(r.gamma_th);
    w.end_row();
  }
  w.field("net").field("net").field(analytics::to_string(r.mode)).field("").field("");
  w.field(r.network_capacity * scale).field(r.network_ber).field(r.network_outage).field(r.gamma_th);
  w.end_row();
  dir.write("report.csv", text.str());
  out << fmt::format("{} ({} users x {} bands): capacity {} {}, BER {}, outage {}\n", analytics::to_string(r.mode),
                     r.num_users, r.num_bands, csv::format_number(r.network_capacity * scale),
                     common.units == Units::bit ? "bit/s" : "nat/s", csv::format_number(r.network_ber),
                     csv::format_number(r.network_outage));
  return kExitSuccess;
}

int cmd_simulate(const CommonOptions& common, const PlanOptions& plan, const std::string& analysis_mode,
                 bool strict, OutputDir& dir, std::ostream& out) {
  const auto sc = apply_plan(load_config(common), plan);
  const system::SystemModel model(sc);

  montecarlo::SimulationConfig config;
  config.samples = common.samples.value_or(sc.simulation.samples);
  config.seed = common.seed.value_or(sc.simulation.seed);
  config.sampling_mode = common.mode.empty() ? sc.simulation.sampling_mode : fading::parse_sampling_mode(common.mode);
  config.analysis_mode = parse_mode_or_default(analysis_mode);
  config.workers = common.workers.value_or(std::max(1u, std::thread::hardware_concurrency()));
  dir.set("seed", config.seed);

  const auto sim = montecarlo::simulate(model, config);
  system::AnalysisOptions options;
  options.mode = config.analysis_mode;
  const auto analytic = system::analyze(model, options);
  const auto rows = montecarlo::compare(sim, analytic.report);

  const double scale = capacity_scale(common.units);
  const auto scaled = [&](const std::string& metric, double v) { return metric == "capacity" ? v * scale : v; };

  std::ostringstream cmp;
  csv::Writer cw(cmp, "simulate_comparison",
                 {"metric", "user", "band", "analytic", "empirical", "abs_gap", "rel_gap", "standard_error",
                  "status"});
  int failures = 0;
  for (const auto& row : rows) {
    cw.field(row.metric);
    if (row.network) {
      cw.field("net").field("net");
    } else {
      cw.field(static_cast<std::uint64_t>(row.user)).field(band_label(row.band));
    }
    cw.field(scaled(row.metric, row.analytic))
        .field(scaled(row.metric, row.empirical))
        .field(scaled(row.metric, row.abs_gap))
        .field(row.rel_gap)
        .field(std::isnan(row.standard_error) ? "" : csv::format_number(scaled(row.metric, row.standard_error)))
        .field(montecarlo::to_string(row.status));
    cw.end_row();
    failures += row.status == montecarlo::CheckStatus::fail;
  }
  dir.write("comparison.csv", cmp.str());

  std::ostringstream sum;
  const std::string cap = capacity_column(common.units);
  csv::Writer sw(sum, "simulate_summary",
                 {"user", "band", "samples", "E_log_analytic", "D_log_analytic", "E_log_empirical",
                  "D_log_empirical", cap, cap + "_se", "ber", "ber_se", "outage", "outage_se", "ks", "ks_exact"});
  for (const auto& s : sim.series) {
    sw.field(static_cast<std::uint64_t>(s.user))
        .field(band_label(s.band))
        .field(static_cast<std::uint64_t>(s.log_snr.count))
        .field(s.analytic.mu)
        .field(s.analytic.sigma2)
        .field(s.log_snr.mean)
        .field(s.log_snr.variance())
        .field(s.capacity.mean * scale)
        .field(s.capacity.standard_error() * scale)
        .field(s.ber.mean)
        .field(s.ber.standard_error())
        .field(s.outage.mean)
        .field(s.outage.standard_error())
        .field(s.ks)
        .field(s.ks_exact ? "true" : "false");
    sw.end_row();
  }
  sw.field("net").field("net").field(static_cast<std::uint64_t>(sim.network_capacity.count));
  sw.field("").field("").field("").field("");
  sw.field(sim.network_capacity.mean * scale).field(sim.network_capacity.standard_error() * scale);
  sw.field(sim.network_ber.mean).field(sim.network_ber.standard_error());
  sw.field(sim.network_outage.mean).field(sim.network_outage.standard_error());
  sw.field("").field("");
  sw.end_row();
  dir.write("summary.csv", sum.str());

  std::ostringstream cdf;
  csv::Writer dw(cdf, "simulate_cdf", {"user", "band", "snr_linear", "empirical_cdf", "analytic_cdf"});
  for (const auto& s : sim.series) {
    for (std::size_t j = 0; j < s.cdf_grid.size(); ++j) {
      dw.field(static_cast<std::uint64_t>(s.user))
          .field(band_label(s.band))
          .field(s.cdf_grid[j])
          .field(s.empirical_cdf(j))
          .field(s.analytic.cdf(s.cdf_grid[j]));
      dw.end_row();
    }
  }
  dir.write("cdf.csv", cdf.str());

  out << fmt::format("{} samples, {} series, {} comparison rows, {} failed -> {}\n", config.samples,
                     sim.series.size(), rows.size(), failures, dir.path().string());
  return strict && failures > 0 ? kExitValidation : kExitSuccess;
}

int cmd_figure(const CommonOptions& common, const std::string& id, OutputDir& dir, std::ostream& out) {
  const auto sc = load_config(common);
  FigureOptions options;
  options.samples = common.samples.value_or(sc.simulation.samples);
  options.seed = common.seed.value_or(sc.simulation.seed);
  options.workers = common.workers.value_or(std::max(1u, std::thread::hardware_concurrency()));
  dir.set("seed", options.seed);

  std::vector<std::string> ids;
  if (id == "all") {
    ids = figure_ids();
  } else {
    ids = {id};
  }
  const double scale = capacity_scale(common.units);
  for (const auto& fid : ids) {
    const auto fig = compute_figure(fid, sc, options);
    for (const auto& curve : fig.curves) {
      auto columns = curve.columns;
      std::vector<bool> is_capacity;
      for (auto& c : columns) {
        is_capacity.push_back(c == "capacity_nat_s");
        if (is_capacity.back()) c = capacity_column(common.units);
      }
      std::ostringstream text;
      csv::Writer w(text, curve.name, columns);
      for (const auto& row : curve.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) w.field(is_capacity[c] ? row[c] * scale : row[c]);
        w.end_row();
      }
      dir.write(curve.name + ".csv", text.str());
    }
    out << fmt::format("{}: {} ({} curves)\n", fig.id, fig.title, fig.curves.size());
  }
  return kExitSuccess;
}

int cmd_constants(const std::string& output, const std::string& check, std::ostream& out, std::ostream& err) {
  const auto text = numerics::render_constants_header();
  if (!check.empty()) {
    std::ifstream file(check, std::ios::binary);
    if (!file) throw ConfigError(check, "cannot open constants file");
    std::ostringstream current;
    current << file.rdbuf();
    if (current.str() != text) {
      err << fmt::format("{} is stale; regenerate it with `mifade constants --output {}`\n", check, check);
      return kExitValidation;
    }
    out << fmt::format("{} is up to date\n", check);
    return kExitSuccess;
  }
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) throw std::runtime_error(fmt::format("cannot write {}", output));
  }
  return kExitSuccess;
}

int cmd_scenario_gen(std::optional<std::uint64_t> seed, const std::string& output, std::ostream& out) {
  const auto text = scenario::serialize_scenario(generate_default_scenario(seed.value_or(kDefaultScenarioSeed)));
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) throw std::runtime_error(fmt::format("cannot write {}", output));
  }
  return kExitSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mifade: multi-band MI link analysis under diverse-medium fading", "mifade"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  CommonOptions common;
  PlanOptions plan;
  std::string units = "nat";
  const std::map<std::string, Units> unit_names{{"nat", Units::nat}, {"bit", Units::bit}};

  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Scenario file or name in the scenario directory");
  };
  const auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out-dir", common.out_dir, "Output directory (default: mifade-out/<command>)");
  };
  const auto add_units = [&](CLI::App* sub) {
    sub->add_option("--units", units, "Capacity unit")->check(CLI::IsMember({"nat", "bit"}));
  };
  const auto add_plan = [&](CLI::App* sub) {
    sub->add_option("--bands", plan.bands, "Replace the band plan with the 1/2/4/8-band preset");
    sub->add_option("--delta-f", plan.delta_f, "Replace the band plan with two bands 50 kHz -/+ delta_f/2");
    sub->add_option("--users", plan.users, "Number of TDMA users K+1");
    sub->add_option("--gamma-th-db", plan.gamma_th_db, "Outage threshold in dB");
    sub->add_option("--power-dbw", plan.power_dbw, "Transmit power budget in dBW");
  };

  auto* media_cmd = app.add_subcommand("media", "Tabulate the medium catalog and skin depths");
  double media_frequency = 50e3;
  media_cmd->add_option("--frequency", media_frequency, "Frequency for loss tangent and skin depth (Hz)");
  add_config(media_cmd);
  add_out(media_cmd);

  auto* skin_cmd = app.add_subcommand("skin-depth", "Skin depth versus frequency");
  std::vector<std::string> skin_media;
  double skin_start = 1e3;
  double skin_stop = 1e6;
  int skin_points = 61;
  bool skin_linear = false;
  skin_cmd->add_option("--medium", skin_media, "Medium names (default: whole catalog)")->delimiter(',');
  skin_cmd->add_option("--f-start", skin_start, "First frequency (Hz)");
  skin_cmd->add_option("--f-stop", skin_stop, "Last frequency (Hz)");
  skin_cmd->add_option("--points", skin_points, "Frequencies per medium");
  skin_cmd->add_flag("--linear", skin_linear, "Linear instead of logarithmic spacing");
  add_config(skin_cmd);
  add_out(skin_cmd);

  auto* design_cmd = app.add_subcommand("design", "Synthesize a MuReC network and sweep its impedance");
  std::vector<double> design_targets;
  std::string design_side = "transmit";
  std::optional<double> design_start;
  std::optional<double> design_stop;
  int design_points = 4001;
  design_cmd->add_option("--targets", design_targets, "Resonance frequencies in Hz (default: the band centers)")
      ->delimiter(',');
  design_cmd->add_option("--side", design_side, "Coil to design for")->check(CLI::IsMember({"transmit", "receive"}));
  design_cmd->add_option("--f-start", design_start, "Sweep start (Hz)");
  design_cmd->add_option("--f-stop", design_stop, "Sweep stop (Hz)");
  design_cmd->add_option("--points", design_points, "Sweep points");
  add_config(design_cmd);
  add_out(design_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Closed-form capacity, BER and outage report");
  add_config(analyze_cmd);
  add_out(analyze_cmd);
  add_units(analyze_cmd);
  add_plan(analyze_cmd);
  analyze_cmd->add_option("--mode", common.mode, "multiplexing or diversity")
      ->check(CLI::IsMember({"multiplexing", "diversity"}));
  analyze_cmd->add_option("--seed", common.seed, "Recorded in the manifest; the analysis is deterministic");

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run compared against the analysis");
  std::string simulate_analysis = "multiplexing";
  bool simulate_strict = false;
  add_config(simulate_cmd);
  add_out(simulate_cmd);
  add_units(simulate_cmd);
  add_plan(simulate_cmd);
  simulate_cmd->add_option("--seed", common.seed, "Random seed (default: the scenario's)");
  simulate_cmd->add_option("--samples", common.samples, "Number of draws (default: the scenario's)");
  simulate_cmd->add_option("--mode", common.mode, "Path sampling: shared_path or independent_per_band")
      ->check(CLI::IsMember({"shared_path", "independent_per_band"}));
  simulate_cmd->add_option("--analysis", simulate_analysis, "multiplexing or diversity")
      ->check(CLI::IsMember({"multiplexing", "diversity"}));
  simulate_cmd->add_option("--workers", common.workers, "Maximum worker threads")->check(CLI::PositiveNumber);
  simulate_cmd->add_flag("--strict", simulate_strict, "Exit with status 4 when any comparison row fails");

  auto* figure_cmd = app.add_subcommand("figure", "Curve CSVs for one figure preset, or all of them");
  std::string figure_id;
  figure_cmd->add_option("id", figure_id, "fig3 ... fig10, or all")->required();
  add_config(figure_cmd);
  add_out(figure_cmd);
  add_units(figure_cmd);
  figure_cmd->add_option("--seed", common.seed, "Monte Carlo seed for fig3");
  figure_cmd->add_option("--samples", common.samples, "Monte Carlo draws for fig3");
  figure_cmd->add_option("--workers", common.workers, "Maximum worker threads")->check(CLI::PositiveNumber);

  auto* constants_cmd = app.add_subcommand("constants", "Regenerate or check the generated constants header");
  std::string constants_output;
  std::string constants_check;
  constants_cmd->add_option("--output", constants_output, "Write the header here (default: stdout)");
  constants_cmd->add_option("--check", constants_check, "Compare against an existing header instead");

  auto* gen_cmd = app.add_subcommand("scenario-gen", "Emit the default scenario");
  std::string gen_output;
  gen_cmd->add_option("--seed", common.seed, "Generator seed");
  gen_cmd->add_option("--output", gen_output, "Write the scenario here (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitConfig;
  }
  common.units = unit_names.at(units);

  const auto open_dir = [&](std::string_view command) {
    const fs::path dir = common.out_dir.empty() ? fs::path("mifade-out") / command : fs::path(common.out_dir);
    return OutputDir(dir, std::string(command), args, common.config, common.seed);
  };

  try {
    if (*media_cmd) {
      auto dir = open_dir("media");
      const int rc = cmd_media(common, media_frequency, dir, out);
      dir.finish();
      return rc;
    }
    if (*skin_cmd) {
      auto dir = open_dir("skin-depth");
      const int rc = cmd_skin_depth(common, skin_media, skin_start, skin_stop, skin_points, skin_linear, dir, out);
      dir.finish();
      return rc;
    }
    if (*design_cmd) {
      auto dir = open_dir("design");
      const int rc = cmd_design(common, design_targets, design_side, design_start, design_stop, design_points, dir, out);
      dir.finish();
      return rc;
    }
    if (*analyze_cmd) {
      auto dir = open_dir("analyze");
      const int rc = cmd_analyze(common, plan, dir, out, err);
      dir.finish();
      return rc;
    }
    if (*simulate_cmd) {
      auto dir = open_dir("simulate");
      const int rc = cmd_simulate(common, plan, simulate_analysis, simulate_strict, dir, out);
      dir.finish();
      return rc;
    }
    if (*figure_cmd) {
      auto dir = open_dir(fmt::format("figure-{}", figure_id));
      const int rc = cmd_figure(common, figure_id, dir, out);
      dir.finish();
      return rc;
    }
    if (*constants_cmd) return cmd_constants(constants_output, constants_check, out, err);
    if (*gen_cmd) return cmd_scenario_gen(common.seed, gen_output, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    err << fmt::format("did not converge after {} iterations (residual {:.3g}): {}\n", e.iterations(), e.residual(),
                       e.what());
    return kExitConvergence;
  } catch (const Error& e) {
    err << "invalid: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace mifade::cli
