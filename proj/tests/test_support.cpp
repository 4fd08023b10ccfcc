#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "txlaw/error.hpp"
#include "txlaw/support.hpp"

using namespace txlaw;

namespace {

SupportOptions diagnostic() {
  SupportOptions o;
  o.diagnostic = true;
  o.density.solver.diagnostic = true;
  return o;
}

// Root of (1/K) Σ lᵢ (t + |z|² − sᵢ)/((sᵢ + |z|²)t + |z|⁴) by plain bisection.
double bisect_t(const SigmaSpectrum& spec, double z) {
  const double z2 = z * z;
  auto g = [&](double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.n(); ++i)
      acc += double(spec.l[i]) * (t + z2 - spec.s[i]) / ((spec.s[i] + z2) * t + z2 * z2);
    return acc;
  };
  double lo = 1e-14, hi = 1e3;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("critical points at s = {1}, |z| = 1.5, w = 10") {
  const CriticalPointSet c = critical_points(10.0, identity_spectrum(10, 10), 1.5);
  REQUIRE(c.occupancy.size() == 4);
  CHECK(c.occupancy[0] == 1);  // I₋₁
  CHECK(c.occupancy[1] == 2);  // I₀ = (−y₁, x₁)
  CHECK(c.occupancy[3] == 1);  // I₂
  CHECK(int(c.points.size()) == c.occupancy[0] + c.occupancy[1] + c.occupancy[2] + c.occupancy[3]);
  CHECK(c.ordering_ok);
  CHECK(c.bound_ok);
}

TEST_CASE("occupancy and ordering over a random sweep") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    SigmaOptions opts;
    opts.auto_normalize = true;
    const SigmaSpectrum spec = make_spectrum({0.2 + 3.0 * u(rng), 0.2 + u(rng)}, {5, 5}, 10, 10, opts);
    const double w = 0.05 + 15.0 * u(rng);
    const double z = 0.1 + 2.0 * u(rng);
    const CriticalPointSet c = critical_points(w, spec, z);
    CHECK(c.occupancy.front() == 1);
    CHECK(c.occupancy.back() == 1);
    for (std::size_t j = 1; j + 1 < c.occupancy.size(); ++j) CHECK((c.occupancy[j] == 0 || c.occupancy[j] == 2));
    CHECK(c.ordering_ok);
    CHECK(c.bound_ratio <= kCriticalValueC0);
  }
}

TEST_CASE("critical value test agrees with the density indicator") {
  const SigmaSpectrum spec = fig2_spectrum();
  for (double z : {0.5, 1.5}) {
    int agree = 0, total = 0;
    for (double E = 0.05; E < 12.0; E *= 1.15) {
      ++total;
      agree += support_indicator(E, spec, z) == in_support_by_critical_values(critical_points(E, spec, z));
    }
    CHECK(agree == total);
  }
}

TEST_CASE("support indicator examples") {
  const SigmaSpectrum fig2 = fig2_spectrum();
  const SupportProfile p = find_edges(fig2, 1.5);
  CHECK_FALSE(support_indicator(p.edges.front().e + 1.0, fig2, 1.5));
  CHECK(support_indicator(2.0, identity_spectrum(10, 10), 0.0, diagnostic()));
  CHECK(support_indicator(1e-4, fig2, 0.5));
  CHECK_THROWS_AS(support_indicator(1.0, fig2, 1.0), DomainError);
}

TEST_CASE("edges of the Marchenko-Pastur law") {
  const SupportProfile p = find_edges(identity_spectrum(10, 10), 0.0, diagnostic());
  REQUIRE(p.bands.size() == 1);
  CHECK(p.bands[0].lo == 0.0);
  REQUIRE(p.edges.size() == 1);
  CHECK(std::abs(p.edges[0].e - 4.0) <= 1e-8);
  CHECK(p.zero_edge.has_value());
}

TEST_CASE("edges of the two-point spectrum") {
  const SigmaSpectrum spec = fig2_spectrum();
  const SupportProfile out = find_edges(spec, 1.5);
  REQUIRE(!out.edges.empty());
  CHECK_FALSE(out.zero_edge.has_value());
  for (const EdgeInfo& e : out.edges) {
    CHECK(e.e > 0.0);
    CHECK(e.f_residual <= 1e-10);
    CHECK(e.dm_residual <= 1e-8);
  }
  CHECK(out.edges.back().e >= 0.01);
  for (std::size_t k = 0; k < out.edges.size(); ++k) CHECK(check_edge_regularity(out, k, 1e-4).regular);

  const SupportProfile in = find_edges(spec, 0.5);
  CHECK(in.zero_edge.has_value());
  CHECK(in.bands.back().lo == 0.0);
}

TEST_CASE("edge regularity") {
  const SupportProfile p = find_edges(fig2_spectrum(), 1.5);
  const RegularityReport top = check_edge_regularity(p, 0, 1e-3);
  CHECK(top.regular);
  CHECK(top.pole_ok);
  CHECK(top.d2f_ok);

  EdgeInfo flat = p.edges[0];
  flat.d2f = 0.0;
  flat.pole_distance = 0.0;
  CHECK(check_edge_regularity(flat, 0.0).regular);  // ε = 0 is vacuous
  CHECK_FALSE(check_edge_regularity(flat, 1e-3).regular);

  // two edges that have nearly collided
  const RegularityReport merged = check_edge_regularity(p.edges[0], 1e-3, {p.edges[0].e + 1e-5});
  CHECK_FALSE(merged.gap_ok);
  CHECK_FALSE(merged.regular);
}

TEST_CASE("bulk regularity") {
  DensityOptions o;
  o.solver.diagnostic = true;
  CHECK(check_bulk_regularity({0.0, 4.0}, identity_spectrum(10, 10), 0.0, 0.2, 0.01, o));
  CHECK_THROWS_AS(check_bulk_regularity({0.0, 4.0}, identity_spectrum(10, 10), 0.0, 2.0, 0.01, o), InputError);
  const SigmaSpectrum fig2 = fig2_spectrum();
  const SupportProfile p = find_edges(fig2, 1.2);
  for (const Band& b : p.bands) CHECK(check_bulk_regularity(b, fig2, 1.2, 0.05, 1e-3));
}

TEST_CASE("edge exponents") {
  const SigmaSpectrum fig2 = fig2_spectrum();
  const SupportProfile p = find_edges(fig2, 1.5);
  for (const EdgeInfo& e : p.edges) {
    const double x = edge_exponent_fit(e, fig2, 1.5);
    CHECK(x >= 0.4);
    CHECK(x <= 0.6);
  }
  const double zero = zero_edge_exponent_fit(fig2, 0.5);
  CHECK(zero >= -0.6);
  CHECK(zero <= -0.4);

  SupportOptions o = diagnostic();
  const SupportProfile mp = find_edges(identity_spectrum(10, 10), 0.0, o);
  const double top = edge_exponent_fit(mp.edges[0], identity_spectrum(10, 10), 0.0, o.density);
  CHECK(top >= 0.45);
  CHECK(top <= 0.55);
}

TEST_CASE("small w parameter t") {
  const SigmaSpectrum fig2 = fig2_spectrum();
  CHECK(std::abs(small_w_t(fig2, 0.5) - bisect_t(fig2, 0.5)) <= 1e-10);
  const SigmaSpectrum one = identity_spectrum(10, 10);
  CHECK(std::abs(small_w_t(one, 0.5) - bisect_t(one, 0.5)) <= 1e-10);

  // t = t₀ + (t₀² K⁻¹ Σ lᵢ/sᵢ² − 2)|z|² + O(|z|⁴)
  const double t0 = harmonic_mean_t0(fig2);
  double inv2 = 0.0;
  for (std::size_t i = 0; i < fig2.n(); ++i) inv2 += fig2.weight(i) / (fig2.s[i] * fig2.s[i]);
  for (double z : {0.02, 0.05, 0.1}) {
    const double expansion = t0 + (t0 * t0 * inv2 - 2.0) * z * z;
    CHECK(std::abs(small_w_t(fig2, z) - expansion) <= 20.0 * std::pow(z, 4));
  }
  CHECK_THROWS_AS(small_w_t(fig2, 0.99), DomainError);
}

TEST_CASE("poles move down and m_c increases off the support") {
  const SigmaSpectrum spec = fig2_spectrum();
  const double z = 1.5;
  const SupportProfile p = find_edges(spec, z);
  std::vector<double> prev;
  double prev_m = -1e300;
  const double top = p.edges.front().e;
  for (double E = top + 0.5; E < top + 10.0; E += 0.5) {
    const std::vector<double> poles = real_poles(E, spec, z);
    if (!prev.empty())
      for (std::size_t k = 0; k < poles.size(); ++k) CHECK(poles[k] <= prev[k] + 1e-12);
    prev = poles;
    const MasterSolution s = solve_mc(SpectralParameter::make({E, 1e-10}, z), spec);
    CHECK(std::abs(s.m_c.imag()) <= 1e-8);
    CHECK(s.m_c.real() > prev_m);
    prev_m = s.m_c.real();
  }
}
