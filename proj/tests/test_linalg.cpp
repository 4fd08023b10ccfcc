#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "txlaw/acceptance.hpp"
#include "txlaw/linalg.hpp"

using namespace txlaw;
using namespace txlaw::linalg;

namespace {

RealMatrix gaussian(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (double& x : a.row(i)) x = g(rng);
  return a;
}

RealMatrix symmetric(std::size_t n, std::mt19937_64& rng) {
  RealMatrix a = gaussian(n, n, rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
  return a;
}

// Determinant by Gaussian elimination with partial pivoting.
double determinant(RealMatrix a) {
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

double match_error(std::vector<cplx> got, std::vector<cplx> want) {
  REQUIRE(got.size() == want.size());
  double worst = 0.0;
  for (const cplx w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](cplx a, cplx b) { return std::abs(a - w) < std::abs(b - w); });
    worst = std::max(worst, std::abs(*it - w));
    got.erase(it);
  }
  return worst;
}

}  // namespace

TEST_CASE("symmetric 2x2") {
  RealMatrix a(2, 2);
  a(0, 0) = a(1, 1) = 2.0;
  a(0, 1) = a(1, 0) = 1.0;
  const SymmetricEigen e = symmetric_eigen(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(std::abs(e.vectors(0, 1)) - std::sqrt(0.5)) < 1e-14);
}

TEST_CASE("diagonal input returns sorted diagonal") {
  RealMatrix a(4, 4);
  const double d[] = {3.0, -1.0, 7.5, 0.25};
  for (int i = 0; i < 4; ++i) a(i, i) = d[i];
  const std::vector<double> v = symmetric_eigenvalues(a);
  CHECK(v == std::vector<double>{-1.0, 0.25, 3.0, 7.5});
}

TEST_CASE("random symmetric 50x50 residual and orthonormality") {
  std::mt19937_64 rng(1);
  const RealMatrix a = symmetric(50, rng);
  const SymmetricEigen e = symmetric_eigen(a);
  RealMatrix vl = e.vectors;
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 50; ++j) vl(i, j) *= e.values[j];
  CHECK(spectral_norm(subtract(multiply(a, e.vectors), vl)) <= 1e-10 * spectral_norm(a));
  CHECK(orthonormality_defect(e.vectors) <= 1e-12);
  CHECK(std::is_sorted(e.values.begin(), e.values.end()));
}

TEST_CASE("svd of identity and rank one") {
  const SVD id = svd(RealMatrix::identity(5));
  for (double s : id.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));

  const std::vector<double> u = {1.0, 2.0, -2.0}, v = {3.0, 0.0, 4.0, 0.0};
  RealMatrix a(3, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) a(i, j) = u[i] * v[j];
  const SVD r = svd(a);
  CHECK(r.sigma[0] == doctest::Approx(15.0).epsilon(1e-13));  // |u| = 3, |v| = 5
  for (std::size_t k = 1; k < r.sigma.size(); ++k) CHECK(r.sigma[k] < 1e-13);
}

TEST_CASE("svd of a random 40x60 matrix") {
  std::mt19937_64 rng(2);
  for (const auto& [m, n] : {std::pair{40, 60}, std::pair{60, 40}}) {
    const RealMatrix a = gaussian(std::size_t(m), std::size_t(n), rng);
    const SVD d = svd(a);
    RealMatrix us = d.u;
    for (std::size_t i = 0; i < us.rows(); ++i)
      for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= d.sigma[j];
    CHECK(spectral_norm(subtract(multiply(us, d.v.transpose()), a)) <= 1e-10 * spectral_norm(a));
    CHECK(orthonormality_defect(d.u) <= 1e-12);
    CHECK(orthonormality_defect(d.v) <= 1e-12);
    CHECK(std::is_sorted(d.sigma.rbegin(), d.sigma.rend()));
  }
}

TEST_CASE("svd of a PSD matrix matches its eigenvalues") {
  std::mt19937_64 rng(3);
  const RealMatrix b = gaussian(30, 30, rng);
  const RealMatrix a = multiply(b, b.transpose());
  const SVD d = svd(a);
  std::vector<double> e = symmetric_eigenvalues(a);
  std::reverse(e.begin(), e.end());
  for (std::size_t i = 0; i < e.size(); ++i) CHECK(std::abs(d.sigma[i] - e[i]) <= 1e-9 * std::max(1.0, e[0]));
}

TEST_CASE("general eigenvalues of small matrices") {
  RealMatrix rot(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  const std::vector<cplx> r = general_eigenvalues(rot);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(r[1] - cplx(0, 1)) < 1e-14);

  // companion of m² − 3m + 2
  RealMatrix c(2, 2);
  c(0, 1) = -2.0;
  c(1, 0) = 1.0;
  c(1, 1) = 3.0;
  const std::vector<cplx> q = general_eigenvalues(c);
  CHECK(std::abs(q[0] - 1.0) < 1e-13);
  CHECK(std::abs(q[1] - 2.0) < 1e-13);
}

TEST_CASE("general eigenvalues against trace and determinant") {
  std::mt19937_64 rng(4);
  const RealMatrix a = gaussian(30, 30, rng);
  const std::vector<cplx> ev = general_eigenvalues(a);
  REQUIRE(ev.size() == 30);
  cplx sum = 0.0, prod = 1.0;
  double trace = 0.0;
  for (const cplx e : ev) {
    sum += e;
    prod *= e;
  }
  for (std::size_t i = 0; i < 30; ++i) trace += a(i, i);
  const double det = determinant(a);
  CHECK(std::abs(sum - trace) <= 1e-8);
  CHECK(std::abs(prod - det) <= 1e-6 * std::abs(det));
  // conjugate pairs are exact
  for (const cplx e : ev)
    if (e.imag() != 0.0) CHECK(std::find(ev.begin(), ev.end(), std::conj(e)) != ev.end());
}

TEST_CASE("eigenvalues of A and its transpose agree") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {5u, 17u, 40u}) {
    const RealMatrix a = gaussian(n, n, rng);
    CHECK(match_error(general_eigenvalues(a), general_eigenvalues(a.transpose())) <= 1e-8);
  }
}

TEST_CASE("companion roots") {
  const std::vector<cplx> sq = companion_roots(std::vector<double>{1.0, 0.0, 1.0});
  REQUIRE(sq.size() == 2);
  CHECK(std::abs(sq[0] - cplx(0, -1)) < 1e-14);
  CHECK(std::abs(sq[1] - cplx(0, 1)) < 1e-14);

  const std::vector<cplx> triple = companion_roots(std::vector<double>{-1.0, 3.0, -3.0, 1.0});
  REQUIRE(triple.size() == 3);
  for (const cplx r : triple) CHECK(std::abs(r - 1.0) <= 1e-3);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> roots;
    while (roots.size() < 7) {
      const cplx c(u(rng), u(rng));
      bool far = true;
      for (const cplx x : roots) far = far && std::abs(x - c) > 0.2;
      if (far) roots.push_back(c);
    }
    std::vector<cplx> coeffs = {1.0};
    for (const cplx x : roots) {
      std::vector<cplx> next(coeffs.size() + 1, 0.0);
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        next[j + 1] += coeffs[j];
        next[j] -= x * coeffs[j];
      }
      coeffs = next;
    }
    CHECK(match_error(companion_roots(coeffs), roots) <= 1e-7);
  }
}

TEST_CASE("haar orthogonal matrices") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 8u, 64u}) CHECK(orthonormality_defect(qr_haar(n, rng)) <= 1e-12);

  int positive = 0;
  for (int k = 0; k < 400; ++k) positive += qr_haar(1, rng)(0, 0) > 0.0;
  CHECK(std::abs(positive - 200) <= 60);

  // entry means vanish within 3 standard errors; each entry has variance 1/n
  const std::size_t n = 4;
  const int samples = 10000;
  RealMatrix mean(n, n);
  for (int k = 0; k < samples; ++k) {
    const RealMatrix q = qr_haar(n, rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) mean(i, j) += q(i, j) / samples;
  }
  const double se = std::sqrt(1.0 / double(n) / samples);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(mean(i, j)) <= 3.0 * se);
}

TEST_CASE("householder qr") {
  std::mt19937_64 rng(8);
  const RealMatrix a = gaussian(50, 20, rng);
  const QR f = householder_qr(a);
  CHECK(spectral_norm(subtract(multiply(f.q, f.r), a)) <= 1e-10 * spectral_norm(a));
  CHECK(orthonormality_defect(f.q) <= 1e-12);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
}

TEST_CASE("randomized kernel sweep") {
  const SweepReport r = kernel_sweep(100, 99);
  CHECK(r.instances == 100);
  CHECK(r.violations == 0);
}
