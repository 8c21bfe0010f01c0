#pragma once

namespace mifade {

/// Natural-log-domain Gaussian: ln X ~ N(mu, sigma2). Describes G, |H|, |H|^2 and the SNR.
struct LognormalParams {
  double mu = 0.0;
  double sigma2 = 0.0;

  bool degenerate() const { return sigma2 == 0.0; }
  double mean() const;      // exp(mu + sigma2 / 2)
  double variance() const;  // (exp(sigma2) - 1) exp(2 mu + sigma2)
  double median() const;    // exp(mu)
  double pdf(double x) const;
  double cdf(double x) const;

  /// Validates sigma2 >= 0 and finiteness; throws DomainError.
  void validate() const;
};

}  // namespace mifade
