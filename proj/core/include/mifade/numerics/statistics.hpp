#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace mifade::numerics {

double normal_cdf(double x, double mean = 0.0, double stddev = 1.0);

/// sup_x |F_n(x) - F(x)| for the empirical CDF of `samples`. Throws DomainError
/// when `samples` is empty.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);
/// Same, for samples already sorted ascending.
double ks_statistic_sorted(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Single-pass mean and variance (Welford), mergeable in a fixed order.
struct RunningMoments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const RunningMoments& other);
  double variance() const;  // unbiased; 0 for fewer than two samples
  double standard_error() const;
};

}  // namespace mifade::numerics
