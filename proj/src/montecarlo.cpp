#include "txlaw/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "txlaw/error.hpp"
#include "txlaw/parallel.hpp"
#include "txlaw/quadrature.hpp"
#include "txlaw/support.hpp"

namespace txlaw {

using linalg::ComplexMatrix;
using linalg::RealMatrix;
using cplx = std::complex<double>;

std::string to_string(TMode m) { return m == TMode::diagonal ? "diagonal" : "haar"; }

std::string to_string(XDist d) {
  switch (d) {
    case XDist::gauss: return "gauss";
    case XDist::rademacher: return "rademacher";
    case XDist::skewed: return "skewed";
  }
  return "gauss";
}

TMode parse_tmode(const std::string& s) {
  if (s == "diagonal") return TMode::diagonal;
  if (s == "haar" || s == "haar-conjugated") return TMode::haar;
  throw InputError("unknown T mode: " + s);
}

XDist parse_xdist(const std::string& s) {
  if (s == "gauss") return XDist::gauss;
  if (s == "rademacher") return XDist::rademacher;
  if (s == "skewed") return XDist::skewed;
  throw InputError("unknown X distribution: " + s);
}

double EnsembleResult::success_fraction() const {
  return runs.empty() ? 0.0 : double(runs.size() - std::size_t(failures)) / double(runs.size());
}

std::uint64_t run_seed(std::uint64_t seed, int run_index) {
  // splitmix64 over the pair
  std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t(run_index) + 1));
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

double draw(XDist d, std::mt19937_64& rng) {
  switch (d) {
    case XDist::gauss: return std::normal_distribution<double>(0.0, 1.0)(rng);
    case XDist::rademacher: return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
    case XDist::skewed: return std::bernoulli_distribution(0.2)(rng) ? 2.0 : -0.5;
  }
  return 0.0;
}

RealMatrix diagonal_t(const SigmaSpectrum& spec) {
  RealMatrix t(std::size_t(spec.N), std::size_t(spec.M));
  const std::vector<double> s = expand(spec);
  for (std::size_t i = 0; i < s.size(); ++i) t(i, i) = std::sqrt(s[i]);
  return t;
}

std::vector<cplx> nontrivial(const std::vector<cplx>& mu, long K) {
  std::vector<cplx> v = mu;
  const std::size_t drop = v.size() > std::size_t(K) ? v.size() - std::size_t(K) : 0;
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  return {v.begin() + std::ptrdiff_t(drop), v.end()};
}

}  // namespace

Sample sample_matrices(const EnsembleConfig& cfg, int run_index) {
  if (cfg.N() < 1 || cfg.M() < 1) throw InputError("sample_matrices: N and M must be positive");
  std::mt19937_64 rng(run_seed(cfg.seed, run_index));
  Sample out;
  out.T = diagonal_t(cfg.spec);
  if (cfg.t_mode == TMode::haar) {
    const RealMatrix u = linalg::qr_haar(std::size_t(cfg.N()), rng);
    const RealMatrix v = linalg::qr_haar(std::size_t(cfg.M()), rng);
    out.T = linalg::multiply(linalg::multiply(u, out.T), v);
  }
  const double scale = 1.0 / std::sqrt(double(cfg.K()));
  out.X = RealMatrix(std::size_t(cfg.M()), std::size_t(cfg.N()));
  for (std::size_t i = 0; i < out.X.rows(); ++i)
    for (double& x : out.X.row(i)) x = scale * draw(cfg.x_dist, rng);
  return out;
}

std::vector<double> singular_spectrum(const RealMatrix& tx, cplx z) {
  const std::size_t n = tx.rows();
  std::vector<double> lambda;
  if (z.imag() == 0.0) {
    RealMatrix y = tx;
    for (std::size_t i = 0; i < n; ++i) y(i, i) -= z.real();
    lambda = linalg::symmetric_eigenvalues(linalg::multiply(y.transpose(), y));
  } else {
    // Real form [[A, −B], [B, A]] of A + iB; every value appears twice.
    RealMatrix r(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        r(i, j) = r(n + i, n + j) = tx(i, j);
      }
    for (std::size_t i = 0; i < n; ++i) {
      r(i, i) -= z.real();
      r(n + i, n + i) -= z.real();
      r(i, n + i) = z.imag();
      r(n + i, i) = -z.imag();
    }
    const std::vector<double> doubled = linalg::symmetric_eigenvalues(linalg::multiply(r.transpose(), r));
    lambda.resize(n);
    for (std::size_t k = 0; k < n; ++k) lambda[k] = 0.5 * (doubled[2 * k] + doubled[2 * k + 1]);
  }
  for (double& l : lambda) l = std::max(l, 0.0);
  std::sort(lambda.begin(), lambda.end());
  return lambda;
}

RunResult sample_run(const EnsembleConfig& cfg, int run_index) {
  const auto start = std::chrono::steady_clock::now();
  RunResult out;
  out.run_index = run_index;
  out.seed_used = run_seed(cfg.seed, run_index);
  try {
    const Sample s = sample_matrices(cfg, run_index);
    const RealMatrix tx = linalg::multiply(s.T, s.X);
    if (cfg.want_eigenvalues) {
      if (cfg.N() > cfg.M()) {
        // TX and XT share their nonzero eigenvalues.
        out.eigenvalues = linalg::general_eigenvalues(linalg::multiply(s.X, s.T));
        out.eigenvalues.resize(std::size_t(cfg.N()), cplx(0.0));
        linalg::sort_complex(out.eigenvalues);
      } else {
        out.eigenvalues = linalg::general_eigenvalues(tx);
      }
    }
    for (const cplx z : cfg.z_list) out.singular.push_back(singular_spectrum(tx, z));
  } catch (const NumericalError& e) {
    out.ok = false;
    out.failure = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  if (cfg.runs < 1) throw InputError("run_ensemble: runs must be positive");
  EnsembleResult out;
  out.runs.resize(std::size_t(cfg.runs));
  parallel_for(out.runs.size(), cfg.threads, [&](std::size_t i) { out.runs[i] = sample_run(cfg, int(i)); });
  for (const auto& r : out.runs) out.failures += r.ok ? 0 : 1;
  return out;
}

MomentCheck moment_self_test(const EnsembleConfig& cfg, int run_index) {
  const Sample s = sample_matrices(cfg, run_index);
  const double n = double(s.X.rows() * s.X.cols());
  double m[7] = {0, 0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < s.X.rows(); ++i)
    for (const double x : s.X.row(i)) {
      double p = 1.0;
      for (int k = 1; k <= 6; ++k) m[k] += (p *= x);
    }
  for (double& v : m) v /= n;
  const double K = double(cfg.K());
  MomentCheck out;
  out.mean = m[1];
  out.variance = m[2];
  out.third = m[3];
  out.expected_third = cfg.x_dist == XDist::skewed ? 1.5 / (K * std::sqrt(K)) : 0.0;
  // A vanishing standard error (Rademacher variance) only allows rounding-level deviations.
  const auto score = [&](double diff, double var) {
    const double se = std::sqrt(std::max(var, 0.0) / n);
    if (se > 1e-14 * std::abs(m[2])) return diff / se;
    return std::abs(diff) <= 1e-12 * m[2] ? 0.0 : std::copysign(HUGE_VAL, diff);
  };
  out.z_mean = score(m[1], m[2]);
  out.z_variance = score(m[2] - 1.0 / K, m[4] - m[2] * m[2]);
  out.z_third = score(m[3] - out.expected_third, m[6] - m[3] * m[3]);
  out.ok = std::abs(out.z_mean) <= 5.0 && std::abs(out.z_variance) <= 5.0 && std::abs(out.z_third) <= 5.0;
  return out;
}

// ---------------------------------------------------------------------------

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const std::size_t k = std::size_t(pos);
  if (k + 1 >= v.size()) return v.back();
  return v[k] + (pos - double(k)) * (v[k + 1] - v[k]);
}

cplx empirical_m2(const std::vector<double>& lambda, cplx w) {
  cplx acc = 0.0;
  for (const double l : lambda) acc += 1.0 / (l - w);
  return acc / double(lambda.size());
}

AveragedLawProfile averaged_law_profile(const EnsembleResult& ens, const SigmaSpectrum& spec, double z_mod, double E,
                                        const std::vector<double>& eta_grid, std::size_t z_index) {
  AveragedLawProfile out;
  out.E = E;
  out.in_support = support_indicator(E, spec, z_mod);
  const double N = double(spec.N);
  for (const double eta : eta_grid) {
    if (!(eta > 0.0)) throw InputError("averaged_law_profile: eta must be positive");
    const cplx w(E, eta);
    AveragedLawPoint p;
    p.eta = eta;
    p.m2c = solve_mc(SpectralParameter::make(w, z_mod), spec).m2c;
    std::vector<double> stat;
    for (const auto& r : ens.runs) {
      if (!r.ok) continue;
      stat.push_back(N * eta * std::abs(empirical_m2(r.singular.at(z_index), w) - p.m2c));
    }
    p.runs = int(stat.size());
    p.median = median(stat);
    p.p90 = quantile(stat, 0.9);
    out.points.push_back(p);
  }
  return out;
}

AveragedLawProfile averaged_law_profile(EnsembleConfig cfg, double z_mod, double E,
                                        const std::vector<double>& eta_grid) {
  cfg.z_list = {cplx(z_mod)};
  cfg.want_eigenvalues = false;
  return averaged_law_profile(run_ensemble(cfg), cfg.spec, z_mod, E, eta_grid);
}

// ---------------------------------------------------------------------------

ComplexMatrix resolvent_from_svd(const RealMatrix& y, cplx w) {
  if (!y.square()) throw InputError("resolvent_from_svd: Y must be square");
  const std::size_t n = y.rows();
  const linalg::SVD d = linalg::svd(y);
  const cplx isw = 1.0 / upper_sqrt(w);
  std::vector<cplx> g(n), h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = d.sigma[k] * d.sigma[k];
    g[k] = 1.0 / (l - w);
    h[k] = isw * d.sigma[k] * g[k];
  }
  ComplexMatrix out(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx a = 0.0, b = 0.0, c = 0.0, e = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        a += g[k] * (d.u(i, k) * d.u(j, k));
        b += h[k] * (d.u(i, k) * d.v(j, k));
        c += h[k] * (d.v(i, k) * d.u(j, k));
        e += g[k] * (d.v(i, k) * d.v(j, k));
      }
      out(i, j) = a;
      out(i, n + j) = b;
      out(n + i, j) = c;
      out(n + i, n + j) = e;
    }
  return out;
}

std::vector<std::array<cplx, 4>> pi_blocks(const SigmaSpectrum& spec, double z_mod, cplx w, cplx m1c, cplx m2c) {
  const cplx sw = upper_sqrt(w);
  std::vector<std::array<cplx, 4>> out;
  for (const double s : expand(spec)) {
    const cplx a = -w * (1.0 + s * m2c), b = -sw * z_mod, c = -sw * z_mod, d = -w * (1.0 + m1c);
    const cplx det = a * d - b * c;
    out.push_back({d / det, -b / det, -c / det, a / det});
  }
  return out;
}

namespace {

double norm2x2(cplx a, cplx b, cplx c, cplx d) {
  // Largest singular value from the trace and determinant of A†A.
  const double t = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  const double det = std::norm(a * d - b * c);
  return std::sqrt(0.5 * (t + std::sqrt(std::max(0.0, t * t - 4.0 * det))));
}

}  // namespace

EntrywiseResult entrywise_law_check(const EnsembleConfig& cfg, double z_mod, cplx w, double psi_scale, double zeta,
                                    int probes) {
  if (cfg.N() != cfg.M()) throw InputError("entrywise_law_check: requires N = M");
  if (cfg.t_mode != TMode::diagonal) throw InputError("entrywise_law_check: requires diagonal T");
  const std::size_t n = std::size_t(cfg.N());
  const double N = double(n);
  const MasterSolution sol = solve_mc(SpectralParameter::make(w, z_mod), cfg.spec);
  if (w.imag() < std::pow(N, -1.0 + zeta) / std::abs(sol.m2c))
    throw DomainError("entrywise_law_check: eta below the validated spectral domain");

  EntrywiseResult out;
  out.w = w;
  out.psi = psi_scale * (std::sqrt((sol.m1c + sol.m2c).imag() / (N * w.imag())) + 1.0 / (N * w.imag()));
  const auto pi = pi_blocks(cfg.spec, z_mod, w, sol.m1c, sol.m2c);
  for (const auto& p : pi)
    out.pi_bound = std::max(out.pi_bound, norm2x2(p[0], p[1], p[2], p[3]) * std::sqrt(std::abs(w)));
  const std::vector<double> s = expand(cfg.spec);

  out.ratios.assign(std::size_t(cfg.runs), 0.0);
  out.probe_ratios.assign(std::size_t(cfg.runs), 0.0);
  out.m1_error.assign(std::size_t(cfg.runs), 0.0);
  parallel_for(std::size_t(cfg.runs), cfg.threads, [&](std::size_t run) {
    const Sample smp = sample_matrices(cfg, int(run));
    RealMatrix y = linalg::multiply(smp.T, smp.X);
    for (std::size_t i = 0; i < n; ++i) y(i, i) -= z_mod;
    ComplexMatrix d = resolvent_from_svd(y, w);
    cplx m1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) m1 += s[i] * d(i, i);
    out.m1_error[run] = std::abs(m1 / N - sol.m1c);
    for (std::size_t i = 0; i < n; ++i) {
      d(i, i) -= pi[i][0];
      d(i, n + i) -= pi[i][1];
      d(n + i, i) -= pi[i][2];
      d(n + i, n + i) -= pi[i][3];
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst = std::max(worst, norm2x2(d(i, j), d(i, n + j), d(n + i, j), d(n + i, n + j)));
    out.ratios[run] = worst / out.psi;

    std::mt19937_64 rng(run_seed(cfg.seed ^ 0x5bd1e995ULL, int(run)));
    std::normal_distribution<double> gauss;
    double probe = 0.0;
    for (int k = 0; k < probes; ++k) {
      std::vector<double> v(2 * n);
      for (double& x : v) x = gauss(rng);
      const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
      cplx q = 0.0;
      for (std::size_t a = 0; a < 2 * n; ++a) {
        cplx row = 0.0;
        for (std::size_t b = 0; b < 2 * n; ++b) row += d(a, b) * v[b];
        q += v[a] * row;
      }
      probe = std::max(probe, std::abs(q) / (norm * norm));
    }
    out.probe_ratios[run] = probe / out.psi;
  });
  return out;
}

// ---------------------------------------------------------------------------

RigidityProfile rigidity_profile(const EnsembleResult& ens, const DensityTable& table, std::size_t z_index) {
  RigidityProfile out;
  std::vector<const RunResult*> good;
  for (const auto& r : ens.runs)
    if (r.ok) good.push_back(&r);
  if (good.empty()) return out;
  const long N = long(good.front()->singular.at(z_index).size());
  const QuantileTable q = quantiles(table, N);

  // Bulk indices: the central 80% of the classical locations in each band.
  for (const Band& b : table.profile.bands) {
    long first = -1, last = -1;
    for (long j = 0; j < N; ++j) {
      if (q.gamma[j] >= b.lo && q.gamma[j] <= b.hi) {
        if (first < 0) first = j;
        last = j;
      }
    }
    if (first < 0) continue;
    const long count = last - first + 1;
    const long lo = first + long(std::ceil(0.1 * double(count)));
    const long hi = first + long(std::floor(0.9 * double(count)));
    for (long j = lo; j <= hi && j <= last; ++j) out.indices.push_back(j + 1);
  }
  std::sort(out.indices.begin(), out.indices.end());

  std::vector<double> all, edge;
  for (const long j : out.indices) {
    std::vector<double> per;
    for (const RunResult* r : good) {
      const double g = q.gamma[std::size_t(j - 1)];
      per.push_back(std::abs(r->singular[z_index][std::size_t(j - 1)] - g) / g);
    }
    all.insert(all.end(), per.begin(), per.end());
    out.max.push_back(*std::max_element(per.begin(), per.end()));
    out.median.push_back(median(std::move(per)));
  }
  const long top = std::max(1L, N / 100);
  for (const RunResult* r : good)
    for (long j = N - top; j < N; ++j) {
      const double g = q.gamma[std::size_t(j)];
      edge.push_back(std::abs(r->singular[z_index][std::size_t(j)] - g) / g);
    }
  out.median_bulk = median(all);
  out.median_edge = median(edge);
  out.runs = int(good.size());
  return out;
}

RigidityProfile rigidity_profile(EnsembleConfig cfg, double z_mod, const TableOptions& opts) {
  cfg.z_list = {cplx(z_mod)};
  cfg.want_eigenvalues = false;
  const EnsembleResult ens = run_ensemble(cfg);
  TableOptions t = opts;
  if (t.threads < cfg.threads) t.threads = cfg.threads;
  return rigidity_profile(ens, tabulate_density(cfg.spec, z_mod, t));
}

ExtremeStats extreme_singular_stats(const EnsembleConfig& cfg, double z_mod, double c0) {
  ExtremeStats out;
  const std::size_t runs = std::size_t(cfg.runs);
  out.lambda_min.assign(runs, 0.0);
  out.lambda_max.assign(runs, 0.0);
  std::vector<int> small(runs, 0), large(runs, 0), normv(runs, 0);
  const double floor_small = std::exp(-std::pow(double(cfg.N()), 0.3));
  parallel_for(runs, cfg.threads, [&](std::size_t run) {
    const Sample s = sample_matrices(cfg, int(run));
    const std::vector<double> l = singular_spectrum(linalg::multiply(s.T, s.X), cplx(z_mod));
    const double nt = linalg::spectral_norm(s.T, 2000), nx = linalg::spectral_norm(s.X, 2000);
    out.lambda_min[run] = l.front();
    out.lambda_max[run] = l.back();
    small[run] = l.front() < floor_small;
    large[run] = l.back() > std::pow(nt * (c0 + 1.0) + z_mod, 2);
    normv[run] = l.back() > std::pow(nt * nx + z_mod, 2) * (1.0 + 1e-9);
  });
  out.small_violations = std::accumulate(small.begin(), small.end(), 0);
  out.large_violations = std::accumulate(large.begin(), large.end(), 0);
  out.norm_violations = std::accumulate(normv.begin(), normv.end(), 0);
  out.median_min = median(out.lambda_min);
  out.median_max = median(out.lambda_max);
  out.runs = cfg.runs;
  return out;
}

// ---------------------------------------------------------------------------

double bump(cplx z) {
  const double u = std::norm(z);
  return u >= 1.0 ? 0.0 : (1.0 - u) * (1.0 - u) * (1.0 - u);
}

double bump_laplacian_l1() { return 32.0 * std::numbers::pi / 9.0; }

double local_circular_target(cplx z0, double a, long K, const RadialProfile& profile) {
  if (profile.r.empty()) throw InputError("local_circular_target: empty radial profile");
  const double scale = std::pow(double(K), -a);
  const GaussRule& rule = gauss_legendre(40);
  const int angles = 128;
  double chi_min = std::nan("");
  for (const double c : profile.chi)
    if (!std::isnan(c)) {
      chi_min = c;
      break;
    }
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const double rho = 0.5 * (rule.x[k] + 1.0);
    double ring = 0.0;
    for (int j = 0; j < angles; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / angles;
      const double r = std::abs(z0 + scale * std::polar(rho, phi));
      double chi;
      if (r < profile.r.front()) {
        chi = chi_min;
      } else if (r > profile.r.back()) {
        throw DomainError("local_circular_target: bump leaves the radial profile");
      } else {
        chi = interpolate_chi(profile, r);
      }
      if (std::isnan(chi)) throw DomainError("local_circular_target: bump overlaps the excluded band");
      ring += chi;
    }
    const double f = std::pow(1.0 - rho * rho, 3);
    acc += 0.5 * rule.w[k] * rho * f * ring * (2.0 * std::numbers::pi / angles);
  }
  return acc / std::numbers::pi;
}

double local_circular_statistic(const std::vector<cplx>& mu, cplx z0, double a, long K) {
  const double ka = std::pow(double(K), a);
  double acc = 0.0;
  for (const cplx m : nontrivial(mu, K)) acc += ka * ka * bump(ka * (m - z0));
  return acc / double(K);
}

double local_circular_bound(double a, long K) { return std::pow(double(K), -0.5 + 2.0 * a) * bump_laplacian_l1(); }

std::vector<double> local_circular_test(const EnsembleResult& ens, long K, cplx z0, double a,
                                        const RadialProfile& profile) {
  const double target = local_circular_target(z0, a, K, profile);
  std::vector<double> out;
  for (const auto& r : ens.runs)
    if (r.ok) out.push_back(std::abs(local_circular_statistic(r.eigenvalues, z0, a, K) - target));
  return out;
}

double radial_cdf(const RadialProfile& p, double r) {
  if (p.r.empty() || r > p.r.back()) return std::nan("");
  if (r < p.r.front()) {
    for (const double c : p.chi)
      if (!std::isnan(c)) return c * r * r;
    return std::nan("");
  }
  const double pos = (r - p.r.front()) / p.step;
  const std::size_t k = std::min(std::size_t(pos), p.r.size() - 1);
  if (k + 1 >= p.r.size()) return p.F[k];
  const double t = pos - double(k);
  return (1.0 - t) * p.F[k] + t * p.F[k + 1];
}

double radial_esd_deviation(const std::vector<cplx>& mu, long K, const RadialProfile& profile) {
  std::vector<double> radii;
  for (const cplx m : nontrivial(mu, K)) radii.push_back(std::abs(m));
  std::sort(radii.begin(), radii.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < profile.r.size(); ++k) {
    if (std::isnan(profile.F[k])) continue;
    const double r = profile.r[k];
    const double count = double(std::upper_bound(radii.begin(), radii.end(), r) - radii.begin());
    worst = std::max(worst, std::abs(count / double(K) - profile.F[k]));
  }
  return worst;
}

double singular_cdf_deviation(const std::vector<double>& lambda, const DensityTable& table) {
  std::vector<double> l = lambda;
  std::sort(l.begin(), l.end());
  const double n = double(l.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < l.size(); ++j) {
    const double F = cdf(table, l[j]);
    worst = std::max({worst, std::abs(F - double(j + 1) / n), std::abs(F - double(j) / n)});
  }
  return worst;
}

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InputError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  KSResult out;
  out.statistic = d;
  const double en = std::sqrt(na * nb / (na + nb));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  // Kolmogorov tail series
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12 * std::abs(sum)) break;
    sign = -sign;
  }
  out.p_value = lambda < 1e-3 ? 1.0 : std::clamp(2.0 * sum, 0.0, 1.0);
  return out;
}

}  // namespace txlaw
