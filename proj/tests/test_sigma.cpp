#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "txlaw/error.hpp"
#include "txlaw/sigma.hpp"

using namespace txlaw;

TEST_CASE("two-point singular values square and group") {
  const double a = std::sqrt(2.0 / 17.0);
  std::vector<double> d(1000);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = i % 2 ? a : 4.0 * a;
  const SigmaSpectrum s = sigma_from_singular_values(d, 1000, 1000);
  REQUIRE(s.n() == 2);
  CHECK(s.s[0] == doctest::Approx(32.0 / 17.0).epsilon(1e-14));
  CHECK(s.s[1] == doctest::Approx(2.0 / 17.0).epsilon(1e-14));
  CHECK(s.l[0] == 500);
  CHECK(s.l[1] == 500);
}

TEST_CASE("identity singular values") {
  const SigmaSpectrum s = sigma_from_singular_values(std::vector<double>(7, 1.0), 7, 9);
  REQUIRE(s.n() == 1);
  CHECK(s.s[0] == 1.0);
  CHECK(s.l[0] == 7);
  CHECK(s.K() == 7);
}

TEST_CASE("auto-normalize rescales by the mean") {
  SigmaOptions opts;
  opts.auto_normalize = true;
  const SigmaSpectrum s = sigma_from_singular_values({1, 2, 2, 1}, 4, 4, opts);
  REQUIRE(s.n() == 2);
  CHECK(s.s[0] == doctest::Approx(8.0 / 5.0).epsilon(1e-14));
  CHECK(s.s[1] == doctest::Approx(2.0 / 5.0).epsilon(1e-14));
  CHECK(s.l == std::vector<long>{2, 2});
  CHECK_THROWS_AS(sigma_from_singular_values({1, 2, 2, 1}, 4, 4), InputError);
}

TEST_CASE("singular value errors") {
  CHECK_THROWS_AS(sigma_from_singular_values({}, 4, 4), InputError);
  CHECK_THROWS_AS(sigma_from_singular_values({1, 1, 0, 1}, 4, 4), InputError);
  CHECK_THROWS_AS(sigma_from_singular_values({1, 1, -1, 1}, 4, 4), InputError);
  CHECK_THROWS_AS(sigma_from_singular_values({1, 1, 1}, 4, 4), InputError);
}

TEST_CASE("round trip reproduces sorted squares") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.6, 1.3);
  std::vector<double> d(40);
  for (double& x : d) x = u(rng);
  SigmaOptions opts;
  opts.auto_normalize = true;
  const SigmaSpectrum s = sigma_from_singular_values(d, 40, 50, opts);
  std::vector<double> sq;
  double mean = 0.0;
  for (double x : d) mean += x * x / 40.0;
  for (double x : d) sq.push_back(x * x / mean);
  std::sort(sq.rbegin(), sq.rend());
  const std::vector<double> e = expand(s);
  REQUIRE(e.size() == sq.size());
  for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] == doctest::Approx(sq[i]).epsilon(1e-10));
}

TEST_CASE("normalize examples") {
  SigmaSpectrum a{{2, 2}, {5, 5}, 10, 10};
  const Normalized na = normalize(a);
  REQUIRE(na.spec.n() == 1);
  CHECK(na.spec.s[0] == 1.0);
  CHECK(na.spec.l[0] == 10);
  CHECK(na.ratio == doctest::Approx(0.5));

  SigmaSpectrum b{{1, 4}, {5, 5}, 10, 10};
  const Normalized nb = normalize(b);
  REQUIRE(nb.spec.n() == 2);
  CHECK(nb.spec.s[0] == doctest::Approx(8.0 / 5.0).epsilon(1e-14));
  CHECK(nb.spec.s[1] == doctest::Approx(2.0 / 5.0).epsilon(1e-14));

  const SigmaSpectrum c = fig2_spectrum();
  const Normalized nc = normalize(c);
  CHECK(nc.spec.s[0] == doctest::Approx(32.0 / 17.0).epsilon(1e-15));
  CHECK(nc.spec.s[1] == doctest::Approx(2.0 / 17.0).epsilon(1e-15));
  CHECK(nc.ratio == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize is idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int k = 0; k < 20; ++k) {
    SigmaSpectrum s{{}, {}, 60, 60};
    for (int i = 0; i < 4; ++i) {
      s.s.push_back(u(rng));
      s.l.push_back(15);
    }
    std::sort(s.s.rbegin(), s.s.rend());
    const Normalized once = normalize(s);
    const Normalized twice = normalize(once.spec);
    CHECK(std::abs(mean_eigenvalue(once.spec) - 1.0) < 1e-14);
    REQUIRE(twice.spec.n() == once.spec.n());
    for (std::size_t i = 0; i < once.spec.n(); ++i) CHECK(twice.spec.s[i] == doctest::Approx(once.spec.s[i]).epsilon(1e-15));
  }
}

TEST_CASE("harmonic mean t0") {
  CHECK(harmonic_mean_t0(identity_spectrum(8, 8)) == doctest::Approx(1.0));
  CHECK(harmonic_mean_t0(fig2_spectrum()) == doctest::Approx(64.0 / 289.0).epsilon(1e-14));
  CHECK(harmonic_mean_t0(make_spectrum({8.0 / 5.0, 2.0 / 5.0}, {2, 2}, 4, 4)) == doctest::Approx(16.0 / 25.0).epsilon(1e-14));
}

TEST_CASE("harmonic mean bounded by the arithmetic mean") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> s;
    for (int i = 0; i < 1 + k % 5; ++i) s.push_back(u(rng));
    SigmaOptions opts;
    opts.auto_normalize = true;
    const SigmaSpectrum spec = make_spectrum(s, std::vector<long>(s.size(), 10), long(10 * s.size()),
                                             long(10 * s.size()), opts);
    const double t0 = harmonic_mean_t0(spec);
    if (spec.n() == 1)
      CHECK(t0 == doctest::Approx(1.0));
    else
      CHECK(t0 < 1.0);
  }
}

TEST_CASE("validate rejects broken invariants") {
  CHECK_NOTHROW(validate(fig2_spectrum(), 0.05));
  CHECK_THROWS_AS(validate(SigmaSpectrum{{}, {}, 4, 4}, 0.05), InputError);
  CHECK_THROWS_AS(validate(SigmaSpectrum{{0.5, 1.5}, {2, 2}, 4, 4}, 0.05), InputError);  // ascending
  CHECK_THROWS_AS(validate(SigmaSpectrum{{1.0}, {3}, 4, 4}, 0.05), InputError);         // Σl ≠ K
  CHECK_THROWS_AS(validate(SigmaSpectrum{{2.0}, {4}, 4, 4}, 0.05), InputError);         // mean 2
  CHECK_THROWS_AS(validate(SigmaSpectrum{{1.96, 0.04}, {2, 2}, 4, 4}, 0.05), InputError);  // below τ
  CHECK_THROWS_AS(validate(SigmaSpectrum{{1.0}, {4}, 4, 100}, 0.05), InputError);       // aspect ratio
  CHECK_NOTHROW(validate(SigmaSpectrum{{1.96, 0.04}, {2, 2}, 4, 4}, 0.01));
}

TEST_CASE("excluded band around the unit circle") {
  CHECK_NOTHROW(check_z_band(1.5, 0.05));
  CHECK_NOTHROW(check_z_band(0.0, 0.05));
  CHECK_THROWS_AS(check_z_band(1.01, 0.05), DomainError);
  CHECK_THROWS_AS(check_z_band(0.99, 0.05), DomainError);
  CHECK_THROWS_AS(check_z_band(-1.0, 0.05), InputError);
}
