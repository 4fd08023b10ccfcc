#pragma once

#include <span>
#include <vector>

namespace txlaw {

// Gauss–Legendre rule on [−1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Cached per order; safe to call from several threads.
const GaussRule& gauss_legendre(int n);

// Legendre coefficients c_j, j < n, of the degree n−1 interpolant of values
// sampled at the rule's nodes.
std::vector<double> legendre_coefficients(const GaussRule& rule, std::span<const double> values);

double legendre_series(std::span<const double> c, double t);

// ∫_{−1}^{t} Σ c_j P_j
double legendre_antiderivative(std::span<const double> c, double t);

// Size of the two trailing coefficients; a resolution indicator.
double legendre_tail(std::span<const double> c);

}  // namespace txlaw
