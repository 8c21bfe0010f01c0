#include "mifade/numerics/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mifade/error.hpp"

namespace mifade::numerics {

double normal_cdf(double x, double mean, double stddev) {
  if (stddev == 0.0) return x < mean ? 0.0 : (x > mean ? 1.0 : 0.5);
  return 0.5 * std::erfc(-(x - mean) / (stddev * std::numbers::sqrt2));
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return ks_statistic_sorted(sorted, cdf);
}

double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw DomainError("KS statistic needs at least one sample");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

void RunningMoments::add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(other.count);
  const double delta = other.mean - mean;
  const double total = na + nb;
  mean += delta * nb / total;
  m2 += other.m2 + delta * delta * na * nb / total;
  count += other.count;
}

double RunningMoments::variance() const {
  return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1);
}

double RunningMoments::standard_error() const {
  return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
}

}  // namespace mifade::numerics
