#include "mifade/numerics/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "mifade/error.hpp"

namespace mifade::numerics {

namespace {

struct ScaledHermite {
  double pn = 0.0;     // p_n(x) * exp(-log_scale)
  double pn1 = 0.0;    // p_{n-1}(x) * exp(-log_scale)
  double log_scale = 0.0;
};

// Orthonormal Hermite recurrence
//   p_0 = pi^(-1/4), p_{k+1} = sqrt(2/(k+1)) x p_k - sqrt(k/(k+1)) p_{k-1},
// renormalized whenever the values grow large.
ScaledHermite orthonormal_hermite(int n, double x) {
  constexpr double kBig = 1e150;
  ScaledHermite out;
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kBig) {
      cur /= kBig;
      prev /= kBig;
      out.log_scale += std::log(kBig);
    }
  }
  out.pn = cur;
  out.pn1 = prev;
  return out;
}

}  // namespace

double QuadratureRule::integrate(const std::function<double(double)>& g) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (weights[i] != 0.0) sum += weights[i] * g(nodes[i]);
  }
  return sum;
}

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1 || order > kMaxHermiteOrder) {
    throw DomainError(fmt::format("Gauss-Hermite order must be in [1, {}], got {}", kMaxHermiteOrder, order));
  }
  const int n = order;
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  rule.log_weights.assign(n, 0.0);

  if (n == 1) {
    rule.weights[0] = std::sqrt(std::numbers::pi);
    rule.log_weights[0] = 0.5 * std::log(std::numbers::pi);
    return rule;
  }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError(fmt::format("tridiagonal eigensolver failed for order {}", n), 0, NAN);
  }
  const Eigen::VectorXd& eig = solver.eigenvalues();

  const double log_n = std::log(static_cast<double>(n));
  const double sqrt_2n = std::sqrt(2.0 * n);
  const int half = n / 2;
  for (int j = 0; j < (n + 1) / 2; ++j) {
    const int idx = half + j;  // nonnegative half, ascending
    double x = (n % 2 == 1 && j == 0) ? 0.0 : std::abs(eig[idx]);
    constexpr int kMaxPolish = 20;
    int it = 0;
    for (; it < kMaxPolish; ++it) {
      const auto h = orthonormal_hermite(n, x);
      const double dx = h.pn / (sqrt_2n * h.pn1);
      x -= dx;
      if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    }
    if (it == kMaxPolish) {
      throw ConvergenceError(fmt::format("Newton polish of Hermite node {} stalled", idx), it, x);
    }
    if (n % 2 == 1 && j == 0) x = 0.0;
    const auto h = orthonormal_hermite(n, x);
    const double log_w = -log_n - 2.0 * (std::log(std::abs(h.pn1)) + h.log_scale);
    const int mirror = n - 1 - idx;
    rule.nodes[mirror] = -x;
    rule.nodes[idx] = x;
    rule.log_weights[idx] = rule.log_weights[mirror] = log_w;
    rule.weights[idx] = rule.weights[mirror] = std::exp(log_w);
  }
  return rule;
}

const QuadratureRule& shared_gauss_hermite_rule(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<const QuadratureRule>(gauss_hermite_rule(order));
  return *slot;
}

std::uint64_t rule_digest(const QuadratureRule& rule) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  const auto feed = [&h](double v) {
    for (char c : fmt::format("{:.11e};", v)) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
  };
  for (std::size_t i = 0; i < rule.order(); ++i) {
    feed(rule.nodes[i]);
    feed(rule.log_weights[i]);
  }
  return h;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double tolerance, unsigned max_depth) {
  AdaptiveResult out;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, max_depth, tolerance, &out.error_estimate, &l1);
  return out;
}

}  // namespace mifade::numerics
