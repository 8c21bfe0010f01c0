#include "mifade/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "mifade/error.hpp"
#include "mifade/numerics/special_functions.hpp"
#include "mifade/random.hpp"

namespace mifade::montecarlo {

namespace {

constexpr double kGridHalfWidthSigmas = 6.0;

struct SeriesAccumulator {
  numerics::RunningMoments log_snr, capacity, ber, outage;
  std::vector<std::uint64_t> bins;  // bins[j]: samples with grid[j-1] < ln gamma <= grid[j]
};

struct ChunkStats {
  std::vector<SeriesAccumulator> series;
  numerics::RunningMoments network_capacity, network_ber, network_outage;
};

double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

std::vector<double> log_grid(const LognormalParams& law) {
  const double half = law.degenerate() ? 1.0 : kGridHalfWidthSigmas * std::sqrt(law.sigma2);
  std::vector<double> grid(kCdfGridPoints);
  for (std::size_t j = 0; j < kCdfGridPoints; ++j) {
    grid[j] = law.mu - half + 2.0 * half * static_cast<double>(j) / (kCdfGridPoints - 1);
  }
  return grid;
}

// Everything one draw needs, resolved up front so the hot loop only reads.
struct Plan {
  const system::SystemModel* model = nullptr;
  SimulationConfig config;
  analytics::ModulationScheme modulation;
  double log_gamma_th = 0.0;
  bool diversity = false;
  std::size_t users = 0;
  std::size_t bands = 0;
  std::vector<std::vector<double>> log_grids;  // per series
  std::vector<double*> sample_slots;           // per series, nullptr when not stored
};

class Worker {
 public:
  explicit Worker(const Plan& plan) : plan_(plan) {
    std::size_t max_segments = 0;
    for (const auto& link : plan.model->scenario().links) {
      max_segments = std::max(max_segments, link.path.segments.size());
    }
    lengths_.resize(max_segments);
    band_log_power_.resize(plan.bands);
  }

  ChunkStats run(std::size_t begin, std::size_t end) {
    ChunkStats stats;
    const std::size_t count = plan_.diversity ? plan_.users : plan_.users * plan_.bands;
    stats.series.resize(count);
    for (auto& s : stats.series) s.bins.assign(kCdfGridPoints + 1, 0);
    std::vector<double> log_snr(count);
    for (std::size_t i = begin; i < end; ++i) {
      draw(i, log_snr);
      double capacity_sum = 0.0;
      double ber_sum = 0.0;
      bool all_out = true;
      for (std::size_t s = 0; s < count; ++s) {
        const double g = log_snr[s];
        const double bandwidth = series_bandwidth(s);
        const double capacity = bandwidth * numerics::softplus(g);
        const double ber = plan_.modulation.alpha * 0.5 *
                           numerics::erfc(std::sqrt(0.5 * plan_.modulation.beta * std::exp(g)));
        const bool out = g < plan_.log_gamma_th;
        auto& acc = stats.series[s];
        acc.log_snr.add(g);
        acc.capacity.add(capacity);
        acc.ber.add(ber);
        acc.outage.add(out ? 1.0 : 0.0);
        const auto& grid = plan_.log_grids[s];
        acc.bins[static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), g) - grid.begin())] += 1;
        if (plan_.sample_slots[s]) plan_.sample_slots[s][i] = g;
        capacity_sum += capacity;
        ber_sum += ber;
        all_out = all_out && out;
      }
      stats.network_capacity.add(capacity_sum / static_cast<double>(plan_.users));
      stats.network_ber.add(ber_sum / static_cast<double>(count));
      stats.network_outage.add(all_out ? 1.0 : 0.0);
    }
    return stats;
  }

 private:
  double series_bandwidth(std::size_t s) const {
    const auto& model = *plan_.model;
    if (plan_.diversity) return model.user(s).budget.base_bandwidth;
    return model.user(s / plan_.bands).bands[s % plan_.bands].bandwidth;
  }

  // ln gamma for every series of draw i.
  void draw(std::size_t i, std::vector<double>& log_snr) {
    const auto& model = *plan_.model;
    const bool shared = plan_.config.sampling_mode == fading::SamplingMode::shared_path;
    for (std::size_t k = 0; k < plan_.users; ++k) {
      const auto& user = model.user(k);
      const auto& path = model.scenario().link_for_user(k).path;
      std::span<double> lengths(lengths_.data(), path.segments.size());
      const auto link = static_cast<std::uint32_t>(k);
      if (shared) {
        random::Stream stream(plan_.config.seed, {link, random::kAllBands, i});
        fading::sample_path_lengths(path, stream, lengths);
      }
      for (std::size_t n = 0; n < plan_.bands; ++n) {
        if (!shared) {
          random::Stream stream(plan_.config.seed, {link, static_cast<std::uint32_t>(n), i});
          fading::sample_path_lengths(path, stream, lengths);
        }
        const auto& band = user.bands[n];
        double exponent = 0.0;
        for (std::size_t j = 0; j < lengths.size(); ++j) exponent += lengths[j] * band.inverse_depths[j];
        band_log_power_[n] = band.deterministic.log_power - 2.0 * exponent;
      }
      if (plan_.diversity) {
        log_snr[k] = user.budget.base_snr_offset() + log_sum_exp(band_log_power_);
      } else {
        for (std::size_t n = 0; n < plan_.bands; ++n) {
          log_snr[k * plan_.bands + n] = user.bands[n].snr_offset + band_log_power_[n];
        }
      }
    }
  }

  const Plan& plan_;
  std::vector<double> lengths_;
  std::vector<double> band_log_power_;
};

void merge_into(ChunkStats& total, const ChunkStats& chunk) {
  if (total.series.empty()) {
    total = chunk;
    return;
  }
  for (std::size_t s = 0; s < total.series.size(); ++s) {
    auto& a = total.series[s];
    const auto& b = chunk.series[s];
    a.log_snr.merge(b.log_snr);
    a.capacity.merge(b.capacity);
    a.ber.merge(b.ber);
    a.outage.merge(b.outage);
    for (std::size_t j = 0; j < a.bins.size(); ++j) a.bins[j] += b.bins[j];
  }
  total.network_capacity.merge(chunk.network_capacity);
  total.network_ber.merge(chunk.network_ber);
  total.network_outage.merge(chunk.network_outage);
}

double degenerate_ks(std::span<const double> log_samples, double mu) {
  std::size_t off = 0;
  for (double g : log_samples) {
    if (std::abs(g - mu) > 1e-9 * std::max(1.0, std::abs(mu))) ++off;
  }
  return log_samples.empty() ? 0.0 : static_cast<double>(off) / static_cast<double>(log_samples.size());
}

}  // namespace

double Series::empirical_cdf(std::size_t grid_index) const {
  const auto n = log_snr.count;
  return n == 0 ? 0.0 : static_cast<double>(cdf_counts.at(grid_index)) / static_cast<double>(n);
}

SimulationResult simulate(const system::SystemModel& model, const SimulationConfig& config) {
  if (config.samples < kMinStatisticalSamples) {
    throw ValidationError(fmt::format("at least {} samples are required, got {}", kMinStatisticalSamples,
                                      config.samples));
  }
  const auto& sc = model.scenario();
  Plan plan;
  plan.model = &model;
  plan.config = config;
  plan.config.workers = std::max(1u, config.workers);
  plan.modulation = analytics::find_modulation(config.modulation.empty() ? sc.analysis.modulation : config.modulation);
  plan.config.modulation = plan.modulation.name;
  const double gamma_th = config.gamma_th > 0.0 ? config.gamma_th : sc.analysis.gamma_th;
  plan.config.gamma_th = gamma_th;
  plan.log_gamma_th = std::log(gamma_th);
  plan.diversity = config.analysis_mode == analytics::AnalysisMode::diversity;
  plan.users = model.num_users();
  plan.bands = model.num_bands();

  system::AnalysisOptions law_options;
  law_options.mode = config.analysis_mode;
  const auto laws = system::snr_laws(model, law_options);

  SimulationResult result;
  result.config = plan.config;
  result.modulation = plan.modulation.name;
  result.gamma_th = gamma_th;
  for (std::size_t k = 0; k < laws.size(); ++k) {
    for (std::size_t n = 0; n < laws[k].size(); ++n) {
      Series s;
      s.user = k;
      s.band = plan.diversity ? analytics::kCombinedBand : n;
      s.bandwidth = plan.diversity ? model.user(k).budget.base_bandwidth : model.user(k).bands[n].bandwidth;
      s.analytic = laws[k][n].params;
      result.series.push_back(std::move(s));
    }
  }

  const bool store = result.series.size() * config.samples <= config.max_stored_samples;
  for (auto& s : result.series) {
    plan.log_grids.push_back(log_grid(s.analytic));
    if (store) s.log_snr_samples.resize(config.samples);
    plan.sample_slots.push_back(store ? s.log_snr_samples.data() : nullptr);
  }

  const std::size_t chunks = (config.samples + kChunkSize - 1) / kChunkSize;
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::map<std::size_t, ChunkStats> pending;
  std::size_t merged = 0;
  ChunkStats total;
  std::exception_ptr failure;
  std::atomic<bool> abort{false};

  const auto work = [&] {
    Worker worker(plan);
    while (!abort.load()) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) break;
      ChunkStats stats;
      try {
        stats = worker.run(c * kChunkSize, std::min(config.samples, (c + 1) * kChunkSize));
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        abort = true;
        break;
      }
      std::lock_guard lock(mutex);
      pending.emplace(c, std::move(stats));
      for (auto it = pending.find(merged); it != pending.end(); it = pending.find(merged)) {
        merge_into(total, it->second);
        pending.erase(it);
        ++merged;
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(plan.config.workers, chunks));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t si = 0; si < result.series.size(); ++si) {
    auto& s = result.series[si];
    auto& acc = total.series[si];
    s.log_snr = acc.log_snr;
    s.capacity = acc.capacity;
    s.ber = acc.ber;
    s.outage = acc.outage;
    const auto& grid = plan.log_grids[si];
    s.cdf_grid.resize(grid.size());
    s.cdf_counts.resize(grid.size());
    std::uint64_t running = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      running += acc.bins[j];
      s.cdf_grid[j] = std::exp(grid[j]);
      s.cdf_counts[j] = running;
    }
    if (s.analytic.degenerate()) {
      s.ks = store ? degenerate_ks(s.log_snr_samples, s.analytic.mu) : 0.0;
      s.ks_exact = store;
    } else if (store) {
      std::vector<double> sorted = s.log_snr_samples;
      std::sort(sorted.begin(), sorted.end());
      const double sd = std::sqrt(s.analytic.sigma2);
      s.ks = numerics::ks_statistic_sorted(sorted, [&](double g) { return numerics::normal_cdf(g, s.analytic.mu, sd); });
      s.ks_exact = true;
    } else {
      const double sd = std::sqrt(s.analytic.sigma2);
      double d = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        d = std::max(d, std::abs(s.empirical_cdf(j) - numerics::normal_cdf(grid[j], s.analytic.mu, sd)));
      }
      s.ks = d;
      s.ks_exact = false;
    }
  }
  result.network_capacity = total.network_capacity;
  result.network_ber = total.network_ber;
  result.network_outage = total.network_outage;
  return result;
}

namespace {

Estimate mean_estimate(std::span<const double> snr, auto&& f) {
  if (snr.empty()) throw DomainError("empirical estimate needs at least one sample");
  numerics::RunningMoments m;
  for (double g : snr) m.add(f(g));
  return {m.mean, m.standard_error()};
}

}  // namespace

Estimate empirical_capacity(std::span<const double> snr, double bandwidth) {
  return mean_estimate(snr, [&](double g) { return bandwidth * std::log1p(g); });
}

Estimate empirical_ber(std::span<const double> snr, const analytics::ModulationScheme& modulation) {
  return mean_estimate(snr, [&](double g) { return modulation.alpha * numerics::q_function(std::sqrt(modulation.beta * g)); });
}

Estimate empirical_outage(std::span<const double> snr, double gamma_th) {
  return mean_estimate(snr, [&](double g) { return g < gamma_th ? 1.0 : 0.0; });
}

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::gap_only:
      return "gap_only";
  }
  return "?";
}

std::vector<ComparisonRow> compare(const SimulationResult& result, const analytics::PerformanceReport& report,
                                   const CompareOptions& options) {
  std::vector<ComparisonRow> rows;
  if (options.metrics.empty()) return rows;
  if (report.rows.size() != result.series.size()) {
    throw DomainError(fmt::format("report has {} rows but the simulation has {} series", report.rows.size(),
                                  result.series.size()));
  }
  const auto wants = [&](std::string_view m) {
    return std::find(options.metrics.begin(), options.metrics.end(), m) != options.metrics.end();
  };
  const bool shared = result.config.sampling_mode == fading::SamplingMode::shared_path;
  const bool diversity = result.config.analysis_mode == analytics::AnalysisMode::diversity;
  const double n = static_cast<double>(result.config.samples);

  const auto judge = [&](ComparisonRow row, bool independence_assumed) {
    row.abs_gap = std::abs(row.empirical - row.analytic);
    row.rel_gap = row.analytic != 0.0 ? row.abs_gap / std::abs(row.analytic) : row.abs_gap;
    if (shared && independence_assumed) {
      row.status = CheckStatus::gap_only;
    } else {
      const bool ok = row.abs_gap <= options.sigma_threshold * row.standard_error ||
                      row.abs_gap <= 1e-12 * std::max(std::abs(row.analytic), 1e-300);
      row.status = ok ? CheckStatus::pass : CheckStatus::fail;
    }
    rows.push_back(row);
  };
  const auto binomial_se = [&](double p, const numerics::RunningMoments& m) {
    return std::max(m.standard_error(), std::sqrt(std::max(p * (1.0 - p), 0.0) / n));
  };

  for (std::size_t i = 0; i < result.series.size(); ++i) {
    const auto& s = result.series[i];
    const auto& r = report.rows[i];
    ComparisonRow base;
    base.user = s.user;
    base.band = s.band;
    if (wants("capacity")) {
      auto row = base;
      row.metric = "capacity";
      row.analytic = r.capacity;
      row.empirical = s.capacity.mean;
      row.standard_error = s.capacity.standard_error();
      judge(row, diversity);
    }
    if (wants("ber")) {
      auto row = base;
      row.metric = "ber";
      row.analytic = r.ber;
      row.empirical = s.ber.mean;
      row.standard_error = s.ber.standard_error();
      judge(row, diversity);
    }
    if (wants("outage")) {
      auto row = base;
      row.metric = "outage";
      row.analytic = r.outage;
      row.empirical = s.outage.mean;
      row.standard_error = binomial_se(r.outage, s.outage);
      judge(row, diversity);
    }
    if (wants("ks")) {
      auto row = base;
      row.metric = "ks_log_snr";
      row.analytic = 0.0;
      row.empirical = s.ks;
      row.abs_gap = s.ks;
      row.rel_gap = s.ks;
      row.standard_error = NAN;
      if (shared && diversity) {
        row.status = CheckStatus::gap_only;
      } else {
        row.status = s.ks < options.ks_tolerance ? CheckStatus::pass : CheckStatus::fail;
      }
      rows.push_back(row);
    }
  }

  ComparisonRow net;
  net.network = true;
  if (wants("capacity")) {
    auto row = net;
    row.metric = "capacity";
    row.analytic = report.network_capacity;
    row.empirical = result.network_capacity.mean;
    row.standard_error = result.network_capacity.standard_error();
    judge(row, diversity);
  }
  if (wants("ber")) {
    auto row = net;
    row.metric = "ber";
    row.analytic = report.network_ber;
    row.empirical = result.network_ber.mean;
    row.standard_error = result.network_ber.standard_error();
    judge(row, diversity);
  }
  if (wants("outage")) {
    auto row = net;
    row.metric = "outage";
    row.analytic = report.network_outage;
    row.empirical = result.network_outage.mean;
    row.standard_error = binomial_se(report.network_outage, result.network_outage);
    judge(row, true);
  }
  return rows;
}

}  // namespace mifade::montecarlo
