#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "txlaw/error.hpp"
#include "txlaw/montecarlo.hpp"

using namespace txlaw;
using cplx = std::complex<double>;

namespace {

EnsembleConfig config(const SigmaSpectrum& spec, int runs, std::uint64_t seed) {
  EnsembleConfig c;
  c.spec = spec;
  c.runs = runs;
  c.seed = seed;
  return c;
}

const RadialProfile& identity_profile() {
  static const RadialProfile p = chi_tilde(identity_spectrum(10, 10), 0.1, 2.0, default_radial_options());
  return p;
}

// sup over r ∈ [0.1, 0.85] of |F̂(r) − r²| for the uniform disk.
double disk_deviation(std::vector<double> radii) {
  std::sort(radii.begin(), radii.end());
  double worst = 0.0;
  for (double r = 0.1; r <= 0.85; r += 0.005) {
    const double count = double(std::upper_bound(radii.begin(), radii.end(), r) - radii.begin());
    worst = std::max(worst, std::abs(count / double(radii.size()) - r * r));
  }
  return worst;
}

}  // namespace

TEST_CASE("runs are deterministic") {
  EnsembleConfig c = config(identity_spectrum(4, 4), 1, 42);
  c.z_list = {cplx(1.5)};
  const RunResult a = sample_run(c, 0), b = sample_run(c, 0);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.singular == b.singular);
  CHECK(a.seed_used == run_seed(42, 0));

  EnsembleConfig e = config(fig2_spectrum(40, 40), 6, 7);
  e.z_list = {cplx(0.5), cplx(0.0, 1.5)};
  e.t_mode = TMode::haar;
  e.threads = 1;
  const EnsembleResult one = run_ensemble(e);
  e.threads = 3;
  const EnsembleResult three = run_ensemble(e);
  REQUIRE(one.runs.size() == three.runs.size());
  for (std::size_t k = 0; k < one.runs.size(); ++k) {
    CHECK(one.runs[k].eigenvalues == three.runs[k].eigenvalues);
    CHECK(one.runs[k].singular == three.runs[k].singular);
  }
  CHECK(run_seed(7, 0) != run_seed(7, 1));
  CHECK(run_seed(7, 0) != run_seed(8, 0));
}

TEST_CASE("trivial zeros for a tall T") {
  EnsembleConfig c = config(make_spectrum({1.0}, {4}, 6, 4), 5, 3);
  c.z_list = {cplx(1.5)};
  for (int k = 0; k < 5; ++k) {
    const RunResult r = sample_run(c, k);
    REQUIRE(r.eigenvalues.size() == 6);
    int zeros = 0;
    for (const cplx mu : r.eigenvalues) zeros += std::abs(mu) <= 1e-8;
    CHECK(zeros == 2);
    for (double l : r.singular[0]) CHECK(l >= 0.0);
    CHECK(r.singular[0].size() == 6);
  }
}

TEST_CASE("entry moments") {
  for (XDist d : {XDist::gauss, XDist::rademacher, XDist::skewed}) {
    EnsembleConfig c = config(identity_spectrum(300, 300), 1, 5);
    c.x_dist = d;
    const MomentCheck m = moment_self_test(c, 0);
    CHECK(m.ok);
    if (d == XDist::skewed) CHECK(m.expected_third == doctest::Approx(1.5 * std::pow(300.0, -1.5)));
    else CHECK(m.expected_third == 0.0);
  }
  CHECK(parse_xdist("rademacher") == XDist::rademacher);
  CHECK(parse_tmode("haar-conjugated") == TMode::haar);
  CHECK_THROWS_AS(parse_xdist("cauchy"), InputError);
}

TEST_CASE("averaged law") {
  EnsembleConfig c = config(fig2_spectrum(500, 500), 20, 11);
  const AveragedLawProfile p = averaged_law_profile(c, 1.5, 2.5, {1.0 / std::sqrt(500.0), 1.0});
  CHECK(p.in_support);
  CHECK(p.points[0].runs == 20);
  CHECK(p.points[0].median <= 10.0);
  CHECK(p.points[1].median <= 2.0);

  // ratio-1 Marchenko–Pastur: w m² + w m + 1 = 0
  EnsembleConfig mp = config(identity_spectrum(300, 300), 5, 12);
  const AveragedLawProfile q = averaged_law_profile(mp, 0.0, 2.0, {1.0});
  const cplx w(2.0, 1.0);
  const cplx d = std::sqrt(w * w - 4.0 * w);
  cplx m = (-w + d) / (2.0 * w);
  if (m.imag() < 0.0) m = (-w - d) / (2.0 * w);
  CHECK(std::abs(q.points[0].m2c - m) <= 1e-10);
  CHECK(q.points[0].median <= 2.0);
}

TEST_CASE("entrywise law") {
  EnsembleConfig c = config(identity_spectrum(200, 200), 20, 13);
  const cplx w(2.0, 0.1);
  const EntrywiseResult r = entrywise_law_check(c, 1.5, w);
  REQUIRE(r.ratios.size() == 20);
  CHECK(std::count_if(r.ratios.begin(), r.ratios.end(), [](double x) { return x <= 10.0; }) >= 19);
  CHECK(r.pi_bound <= 10.0);

  EnsembleConfig few = config(identity_spectrum(200, 200), 3, 13);
  const EntrywiseResult base = entrywise_law_check(few, 1.5, w);
  const EntrywiseResult small = entrywise_law_check(few, 1.5, w, 0.1);
  for (std::size_t k = 0; k < base.ratios.size(); ++k)
    CHECK(small.ratios[k] == doctest::Approx(10.0 * base.ratios[k]).epsilon(1e-9));

  CHECK_THROWS_AS(entrywise_law_check(few, 1.5, cplx(2.0, 1e-4)), DomainError);
  EnsembleConfig tall = config(make_spectrum({1.0}, {200}, 250, 200), 1, 1);
  CHECK_THROWS_AS(entrywise_law_check(tall, 1.5, w), InputError);
}

TEST_CASE("resolvent from the singular decomposition") {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g;
  const std::size_t n = 6;
  linalg::RealMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (double& x : y.row(i)) x = g(rng);
  const cplx w(0.7, 0.3);
  const linalg::ComplexMatrix G = resolvent_from_svd(y, w);
  // G is the inverse of [[−w, √w Y], [√w Yᵀ, −w]]
  const cplx sw = std::sqrt(w);
  linalg::ComplexMatrix H(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    H(i, i) = -w;
    H(n + i, n + i) = -w;
    for (std::size_t j = 0; j < n; ++j) {
      H(i, n + j) = sw * y(i, j);
      H(n + j, i) = sw * y(i, j);
    }
  }
  const linalg::ComplexMatrix P = linalg::multiply(H, G);
  double worst = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) worst = std::max(worst, std::abs(P(i, j) - (i == j ? 1.0 : 0.0)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("extreme singular values") {
  EnsembleConfig c = config(fig2_spectrum(500, 500), 50, 15);
  const ExtremeStats s = extreme_singular_stats(c, 1.5);
  CHECK(s.small_violations == 0);
  CHECK(s.large_violations == 0);
  CHECK(s.norm_violations == 0);

  EnsembleConfig d = config(fig2_spectrum(200, 200), 10, 16);
  const ExtremeStats near = extreme_singular_stats(d, 1.5);
  const ExtremeStats far = extreme_singular_stats(d, 3.0);
  CHECK(far.median_min > near.median_min);
}

TEST_CASE("singular spectra do not see rotations or the phase of z") {
  EnsembleConfig diag = config(fig2_spectrum(200, 200), 50, 17);
  diag.z_list = {cplx(1.5)};
  diag.want_eigenvalues = false;
  EnsembleConfig haar = diag;
  haar.t_mode = TMode::haar;
  haar.seed = 18;
  std::vector<double> a, b;
  for (const auto& r : run_ensemble(diag).runs) a.insert(a.end(), r.singular[0].begin(), r.singular[0].end());
  for (const auto& r : run_ensemble(haar).runs) b.insert(b.end(), r.singular[0].begin(), r.singular[0].end());
  CHECK(ks_two_sample(a, b).p_value >= 0.01);

  EnsembleConfig phase = diag;
  phase.seed = 19;
  phase.runs = 20;
  phase.z_list = {cplx(1.5), std::polar(1.5, 2.0)};
  std::vector<double> p0, p1;
  for (const auto& r : run_ensemble(phase).runs) {
    p0.insert(p0.end(), r.singular[0].begin(), r.singular[0].end());
    p1.insert(p1.end(), r.singular[1].begin(), r.singular[1].end());
  }
  CHECK(ks_two_sample(p0, p1).p_value >= 0.01);
}

TEST_CASE("bump function") {
  CHECK(bump(0.0) == 1.0);
  CHECK(bump(cplx(0.0, 1.0)) == 0.0);
  CHECK(bump(2.0) == 0.0);
  // ‖ΔF‖₁ by midpoint quadrature of the radial Laplacian F″ + F′/r
  const int n = 200000;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double r = (k + 0.5) / n;
    const double f1 = -6.0 * r * std::pow(1.0 - r * r, 2);
    const double f2 = -6.0 * std::pow(1.0 - r * r, 2) + 24.0 * r * r * (1.0 - r * r);
    acc += std::abs(f2 + f1 / r) * 2.0 * std::numbers::pi * r / n;
  }
  CHECK(bump_laplacian_l1() == doctest::Approx(acc).epsilon(1e-6));
  CHECK(local_circular_bound(0.25, 512) == doctest::Approx(bump_laplacian_l1()));
}

TEST_CASE("local circular law for T = I") {
  const long K = 512;
  EnsembleConfig c = config(identity_spectrum(K, K), 20, 20);
  c.z_list = {cplx(1.5)};
  const EnsembleResult ens = run_ensemble(c);
  const RadialProfile& p = identity_profile();

  CHECK(std::abs(local_circular_target(1.5, 0.25, K, p)) <= 1e-6);
  const double bound = 5.0 * local_circular_bound(0.25, K) * std::pow(double(K), 0.05);
  CHECK(median(local_circular_test(ens, K, 1.5, 0.25, p)) <= bound);

  const cplx z0(0.0, 0.5);
  CHECK(std::abs(local_circular_target(z0, 0.25, K, p) - 0.25) <= 0.02 / 4.0 + 1e-3);
  CHECK(median(local_circular_test(ens, K, z0, 0.25, p)) <= bound);
  CHECK_THROWS_AS(local_circular_target(1.0, 0.25, K, p), DomainError);
}

TEST_CASE("radial empirical distribution for T = I") {
  EnsembleConfig c = config(identity_spectrum(1000, 1000), 20, 21);
  const EnsembleResult ens = run_ensemble(c);
  std::vector<double> single, pooled, devs;
  for (const auto& r : ens.runs) {
    std::vector<double> radii;
    for (const cplx mu : r.eigenvalues) radii.push_back(std::abs(mu));
    devs.push_back(disk_deviation(radii));
    pooled.insert(pooled.end(), radii.begin(), radii.end());
    if (single.empty()) single = radii;
  }
  CHECK(median(devs) <= 0.03);
  CHECK(disk_deviation(pooled) < disk_deviation(single));

  const RadialProfile& p = identity_profile();
  CHECK(radial_cdf(p, 0.5) == doctest::Approx(0.25).epsilon(0.02));
  CHECK(radial_cdf(p, 0.05) == doctest::Approx(0.0025).epsilon(0.02));
  CHECK(radial_esd_deviation(ens.runs[0].eigenvalues, 1000, p) <= 0.04);
}

TEST_CASE("two-sample KS") {
  const KSResult same = ks_two_sample({1, 2, 3, 4}, {1, 2, 3, 4});
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == doctest::Approx(1.0));
  CHECK(ks_two_sample({1, 2, 3}, {4, 5, 6}).statistic == 1.0);

  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  std::vector<double> a(2000), b(2000), c(2000);
  for (double& x : a) x = g(rng);
  for (double& x : b) x = g(rng);
  for (double& x : c) x = g(rng) + 0.3;
  CHECK(ks_two_sample(a, b).p_value > 0.01);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
  CHECK_THROWS_AS(ks_two_sample({}, {1.0}), InputError);
}
