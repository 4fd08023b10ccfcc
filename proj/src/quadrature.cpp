#include "txlaw/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "txlaw/error.hpp"

namespace txlaw {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre_pair(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre_pair(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[n - 1 - i] = x;
    rule.x[i] = -x;
    rule.w[i] = rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw InputError("gauss_legendre: order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build_rule(n));
  return *slot;
}

std::vector<double> legendre_coefficients(const GaussRule& rule, std::span<const double> values) {
  const std::size_t n = rule.x.size();
  if (values.size() != n) throw InputError("legendre_coefficients: size mismatch");
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = rule.x[k];
    const double fw = values[k] * rule.w[k];
    double p0 = 1.0, p1 = x;
    c[0] += fw;
    if (n > 1) c[1] += fw * x;
    for (std::size_t j = 2; j < n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / double(j);
      c[j] += fw * p2;
      p0 = p1;
      p1 = p2;
    }
  }
  for (std::size_t j = 0; j < n; ++j) c[j] *= (2.0 * j + 1.0) / 2.0;
  return c;
}

double legendre_series(std::span<const double> c, double t) {
  if (c.empty()) return 0.0;
  double sum = c[0];
  double p0 = 1.0, p1 = t;
  if (c.size() > 1) sum += c[1] * t;
  for (std::size_t j = 2; j < c.size(); ++j) {
    const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / double(j);
    sum += c[j] * p2;
    p0 = p1;
    p1 = p2;
  }
  return sum;
}

double legendre_antiderivative(std::span<const double> c, double t) {
  if (c.empty()) return 0.0;
  // ∫_{−1}^t P_j = (P_{j+1}(t) − P_{j−1}(t))/(2j+1) for j ≥ 1.
  const std::size_t n = c.size();
  std::vector<double> p(n + 1);
  p[0] = 1.0;
  p[1] = t;
  for (std::size_t j = 2; j <= n; ++j) p[j] = ((2.0 * j - 1.0) * t * p[j - 1] - (j - 1.0) * p[j - 2]) / double(j);
  double sum = c[0] * (t + 1.0);
  for (std::size_t j = 1; j < n; ++j) sum += c[j] * (p[j + 1] - p[j - 1]) / (2.0 * j + 1.0);
  return sum;
}

double legendre_tail(std::span<const double> c) {
  if (c.size() < 2) return c.empty() ? 0.0 : std::abs(c[0]);
  return std::abs(c[c.size() - 1]) + std::abs(c[c.size() - 2]);
}

}  // namespace txlaw
