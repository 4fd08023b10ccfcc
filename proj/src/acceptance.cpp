#include "txlaw/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "txlaw/density.hpp"
#include "txlaw/error.hpp"
#include "txlaw/linalg.hpp"
#include "txlaw/montecarlo.hpp"
#include "txlaw/support.hpp"

namespace txlaw {

namespace {

using cplx = std::complex<double>;
using linalg::RealMatrix;

struct Recorder {
  CriterionResult& r;
  void check(const std::string& name, double value, double limit, bool pass) {
    r.checks.push_back({name, pass, value, limit});
  }
  void at_most(const std::string& name, double value, double limit) { check(name, value, limit, value <= limit); }
  void at_least(const std::string& name, double value, double limit) { check(name, value, limit, value >= limit); }
  void within(const std::string& name, double value, double lo, double hi) {
    r.checks.push_back({name + " in [" + fmt(lo) + ", " + fmt(hi) + "]", value >= lo && value <= hi, value, hi});
  }
  static std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }
};

std::string zlabel(double z) { return "|z|=" + Recorder::fmt(z); }

double mp_density(double x) { return std::sqrt((4.0 - x) / x) / (2.0 * std::numbers::pi); }

// ---------------------------------------------------------------------------

void criterion1(Recorder& rec, const AcceptanceOptions&) {
  const SigmaSpectrum spec = identity_spectrum(1000, 1000);
  SupportOptions sopts;
  sopts.diagnostic = true;
  const SupportProfile prof = find_edges(spec, 0.0, sopts);
  DensityOptions dopts;
  dopts.solver.diagnostic = true;
  double worst = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double x = 0.1 + 3.8 * k / 400.0;
    worst = std::max(worst, std::abs(density_at(x, 0.0, spec, dopts).rho2 - mp_density(x)));
  }
  rec.at_most("max |rho2c - MP| on [0.1, 3.9]", worst, 1e-6);
  const double top = prof.edges.empty() ? NAN : prof.edges.front().e;
  rec.at_most("|top edge - 4|", std::abs(top - 4.0), 1e-8);
  const double bottom = prof.bands.empty() ? NAN : prof.bands.back().lo;
  rec.at_most("lowest edge (expected 0)", std::abs(bottom), 1e-8);
}

void criterion2(Recorder& rec, const AcceptanceOptions& o) {
  RadialOptions ro = default_radial_options();
  ro.threads = o.threads;
  const RadialProfile p = chi_tilde(identity_spectrum(1000, 1000), 0.1, 2.0, ro);
  double in = 0.0, out = 0.0;
  for (std::size_t k = 0; k < p.r.size(); ++k) {
    if (std::isnan(p.chi[k])) continue;
    if (p.r[k] <= 0.85 + 1e-12) in = std::max(in, std::abs(p.chi[k] - 1.0));
    if (p.r[k] >= 1.15 - 1e-12) out = std::max(out, std::abs(p.chi[k]));
  }
  rec.at_most("max |chi - 1| on [0.1, 0.85]", in, 0.02);
  rec.at_most("max |chi| on [1.15, 2]", out, 0.02);
  rec.within("F(1.15)", radial_cdf(p, 1.15), 0.98, 1.02);
}

void criterion3(Recorder& rec, const AcceptanceOptions& o) {
  const SigmaSpectrum spec = fig2_spectrum();
  for (const double z : {0.5, 0.75, 1.2, 1.5}) {
    TableOptions t;
    t.threads = o.threads;
    t.support.threads = o.threads;
    const DensityTable table = tabulate_density(spec, z, t);
    const SupportProfile& prof = table.profile;
    rec.at_most(zlabel(z) + " |mass - 1|", std::abs(table.total_mass - 1.0), 1e-4);
    if (z < 1.0) {
      rec.check(zlabel(z) + " support reaches 0", prof.zero_edge ? 0.0 : 1.0, 0.0, prof.zero_edge.has_value());
      rec.within(zlabel(z) + " exponent at 0", zero_edge_exponent_fit(spec, z), -0.6, -0.4);
    } else {
      const double lowest = prof.bands.empty() ? NAN : prof.bands.back().lo;
      rec.at_least(zlabel(z) + " lowest edge", lowest, 0.01);
    }
    double fres = 0.0, mres = 0.0;
    bool regular = true;
    for (std::size_t k = 0; k < prof.edges.size(); ++k) {
      fres = std::max(fres, prof.edges[k].f_residual);
      mres = std::max(mres, prof.edges[k].dm_residual);
      regular = regular && check_edge_regularity(prof, k, 1e-4).regular;
    }
    rec.at_most(zlabel(z) + " max edge |f|", fres, 1e-10);
    rec.at_most(zlabel(z) + " max edge |df/dm|", mres, 1e-8);
    rec.check(zlabel(z) + " edges regular at eps=1e-4", regular ? 1.0 : 0.0, 1.0, regular);
  }
}

void criterion4(Recorder& rec, const AcceptanceOptions& o) {
  const SweepReport r = lemma_sweep(100, o.seed);
  rec.at_most("violations over " + std::to_string(r.instances) + " instances", r.violations, 0);
  rec.check("largest critical-value ratio (C0 = " + Recorder::fmt(kCriticalValueC0) + ")", r.max_ratio,
            kCriticalValueC0, r.max_ratio <= kCriticalValueC0);
}

void criterion5(Recorder& rec, const AcceptanceOptions&) {
  const SigmaSpectrum spec = fig2_spectrum();
  const double t = small_w_t(spec, 0.5);
  const MasterSolution sol = solve_mc(SpectralParameter::make(cplx(1e-8, 1e-8), 0.5), spec);
  rec.at_most("|m_c(1e-8(1+i)) - i sqrt(t)| at |z|=0.5", std::abs(sol.m_c - cplx(0.0, std::sqrt(t))), 1e-3);
  rec.at_most("|t(0.01) - 64/289|", std::abs(small_w_t(spec, 0.01) - 64.0 / 289.0), 1e-4);
}

void criterion6(Recorder& rec, const AcceptanceOptions& o) {
  const SigmaSpectrum spec = fig2_spectrum();
  for (const double z : {0.5, 1.5}) {
    TableOptions t;
    t.threads = o.threads;
    t.support.threads = o.threads;
    const DensityTable table = tabulate_density(spec, z, t);
    const double top = table.profile.bands.front().hi;
    std::vector<cplx> samples;
    for (int k = 0; k < 10; ++k) samples.emplace_back(1.2 * top * (k + 0.5) / 10.0, 0.1 + 0.1 * k);
    const StieltjesReport s = verify_stieltjes(table, spec, samples, 1e-4);
    rec.at_most(zlabel(z) + " max rel dev (rho1)", s.max_rel1, 1e-4);
    rec.at_most(zlabel(z) + " max rel dev (rho2)", s.max_rel2, 1e-4);
  }
}

void criterion7(Recorder& rec, const AcceptanceOptions& o) {
  const long N = o.N ? o.N : 1000;
  EnsembleConfig cfg;
  cfg.spec = fig2_spectrum(N, N);
  cfg.z_list = {cplx(1.5)};
  cfg.runs = o.runs ? o.runs : 20;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  const EnsembleResult ens = run_ensemble(cfg);
  rec.at_least("successful runs", ens.success_fraction(), 0.95);
  TableOptions t;
  t.threads = o.threads;
  const DensityTable table = tabulate_density(cfg.spec, 1.5, t);
  RadialOptions ro = default_radial_options();
  ro.threads = o.threads;
  const RadialProfile prof = chi_tilde(cfg.spec, 0.1, 2.0, ro);
  std::vector<double> sing, radial;
  for (const auto& r : ens.runs) {
    if (!r.ok) continue;
    sing.push_back(singular_cdf_deviation(r.singular[0], table));
    radial.push_back(radial_esd_deviation(r.eigenvalues, cfg.K(), prof));
  }
  rec.at_most("median sup|CDF dev| of singular spectrum at |z|=1.5", median(sing), 0.02);
  rec.at_most("median sup|F_hat - F| off the unit band", median(radial), 0.04);
}

void criterion8(Recorder& rec, const AcceptanceOptions& o) {
  const long N = o.N ? o.N : 500;
  EnsembleConfig cfg;
  cfg.spec = fig2_spectrum(N, N);
  cfg.runs = o.runs ? o.runs : 20;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  TableOptions t;
  t.threads = o.threads;
  const double E = quantiles(tabulate_density(cfg.spec, 1.5, t), 2).gamma[0];
  const double eta_main = 1.0 / std::sqrt(double(N));
  std::vector<double> grid;
  const double eta_min = 5.0 / double(N);
  for (int k = 0; k <= 12; ++k) grid.push_back(std::exp(std::log(eta_min) * k / 12.0));
  grid.push_back(eta_main);
  std::sort(grid.begin(), grid.end(), std::greater<>());
  const AveragedLawProfile prof = averaged_law_profile(cfg, 1.5, E, grid);
  double at_main = NAN, worst = 0.0;
  for (const auto& p : prof.points) {
    if (p.eta == eta_main) at_main = p.median;
    worst = std::max(worst, p.median);
  }
  rec.check("E in support", E, 0.0, prof.in_support);
  rec.at_most("median N eta |m2 - m2c| at eta = N^-1/2", at_main, 10.0);
  rec.at_most("max median over eta in [5/N, 1]", worst, 10.0);
}

void criterion9(Recorder& rec, const AcceptanceOptions& o) {
  const long N = o.N ? o.N : 1000;
  const auto bulk = [&](long n) {
    EnsembleConfig cfg;
    cfg.spec = identity_spectrum(n, n);
    cfg.runs = o.runs ? o.runs : 20;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    TableOptions t;
    t.threads = o.threads;
    return rigidity_profile(cfg, 1.5, t).median_bulk;
  };
  const double big = bulk(N), small = bulk(N / 2);
  rec.at_most("median bulk relative error at N=" + std::to_string(N), big, std::pow(double(N), -0.8));
  rec.within("error ratio N/2 vs N", small / big, 1.3, 3.1);
}

void criterion10(Recorder& rec, const AcceptanceOptions& o) {
  const long K = o.N ? o.N : 512;
  const double a = 0.25;
  RadialOptions ro = default_radial_options();
  ro.threads = o.threads;
  const RadialProfile prof = chi_tilde(identity_spectrum(K, K), 0.1, 0.95, ro);
  std::vector<cplx> trials = {0.0, 0.3, cplx(0, 0.3), -0.3, cplx(0, -0.3), 0.6};
  for (const double ang : {0.25, 0.75, 1.25, 1.75}) trials.push_back(std::polar(0.5, ang * std::numbers::pi));
  std::map<long, EnsembleResult> ens;
  for (const long k : {K / 2, K, 2 * K}) {
    EnsembleConfig cfg;
    cfg.spec = identity_spectrum(k, k);
    cfg.runs = o.runs ? o.runs : 20;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    ens[k] = run_ensemble(cfg);
    rec.at_least("successful runs at K=" + std::to_string(k), ens[k].success_fraction(), 0.95);
  }
  int decreased = 0, violations = 0;
  for (const cplx z0 : trials) {
    const double lo = median(local_circular_test(ens[K / 2], K / 2, z0, a, prof));
    const double hi = median(local_circular_test(ens[2 * K], 2 * K, z0, a, prof));
    decreased += hi < lo;
    const double bound = 10.0 * local_circular_bound(a, K);
    for (const double e : local_circular_test(ens[K], K, z0, a, prof)) violations += e > bound;
  }
  rec.at_least("fraction of trials with smaller error at K=" + std::to_string(2 * K),
               double(decreased) / double(trials.size()), 0.7);
  rec.at_most("headroom violations at K=" + std::to_string(K), violations, 0);
}

void criterion11(Recorder& rec, const AcceptanceOptions& o) {
  const SweepReport r = kernel_sweep(100, o.seed);
  rec.at_most("kernel violations over " + std::to_string(r.instances) + " instances", r.violations, 0);
}

struct CriterionSpec {
  const char* title;
  double limit;
  void (*fn)(Recorder&, const AcceptanceOptions&);
};

const CriterionSpec kCriteria[kCriterionCount] = {
    {"Marchenko-Pastur oracle", 5, criterion1},
    {"circular-law limit for T = I", 60, criterion2},
    {"two-point spectrum densities and edges", 120, criterion3},
    {"pole, critical point and ordering sweep", 60, criterion4},
    {"small-w asymptote", 5, criterion5},
    {"Stieltjes consistency", 30, criterion6},
    {"global ESD match", 1200, criterion7},
    {"averaged local law", 600, criterion8},
    {"singular value rigidity", 1800, criterion9},
    {"local circular law scaling", 1800, criterion10},
    {"dense kernel sweep", 120, criterion11},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > kCriterionCount) throw InputError("unknown acceptance criterion " + std::to_string(id));
  const CriterionSpec& spec = kCriteria[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = spec.title;
  r.time_limit = spec.limit;
  const auto start = std::chrono::steady_clock::now();
  Recorder rec{r};
  try {
    spec.fn(rec, opts);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.pass = r.error.empty() && !r.checks.empty() && r.seconds <= r.time_limit;
  for (const auto& c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  if (suite == "oracles") return {1, 2, 5, 6};
  if (suite == "figures") return {3};
  if (suite == "circular-law") return {2, 7, 10};
  if (suite == "local-laws") return {8, 9};
  if (suite == "kernels") return {4, 11};
  std::vector<int> out;
  std::istringstream in(suite);
  std::string item;
  while (std::getline(in, item, ',')) {
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(item, &used);
      if (used != item.size()) id = 0;
    } catch (const std::exception&) {
      id = 0;
    }
    if (id < 1 || id > kCriterionCount) throw InputError("unknown suite '" + suite + "'");
    out.push_back(id);
  }
  if (out.empty()) throw InputError("empty suite");
  return out;
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream s;
  s << "criterion " << r.id << " " << (r.pass ? "PASS" : "FAIL") << "  " << r.title << "  (" << r.seconds << " s, limit "
    << r.time_limit << " s)";
  for (const auto& c : r.checks)
    if (!c.pass) s << "\n    failed: " << c.name << " = " << c.value << " (limit " << c.limit << ")";
  if (!r.error.empty()) s << "\n    error: " << r.error;
  return s.str();
}

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}});
  nlohmann::json j = {{"criterion", r.id}, {"title", r.title},           {"pass", r.pass},
                      {"seconds", r.seconds}, {"time_limit", r.time_limit}, {"checks", checks}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

// ---------------------------------------------------------------------------

namespace {

void note(SweepReport& r, const std::string& what) {
  ++r.violations;
  if (r.notes.size() < 10) r.notes.push_back(what);
}

SigmaSpectrum random_spectrum(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 3), mult(1, 20);
  std::uniform_real_distribution<double> value(0.2, 4.0);
  for (;;) {
    const int n = count(rng);
    std::vector<double> s;
    std::vector<long> l;
    for (int i = 0; i < n; ++i) {
      s.push_back(value(rng));
      l.push_back(mult(rng));
    }
    std::vector<double> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    bool separated = true;
    for (int i = 0; i + 1 < n; ++i) separated = separated && sorted[i + 1] - sorted[i] > 0.05;
    if (!separated) continue;
    long K = 0;
    for (const long v : l) K += v;
    SigmaOptions o;
    o.auto_normalize = true;
    return make_spectrum(s, l, K, K, o);
  }
}

}  // namespace

SweepReport lemma_sweep(int instances, std::uint64_t seed) {
  SweepReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> zdist(0.05, 2.5), logw(std::log(1e-3), std::log(30.0));
  const double slack = 1e-10;
  for (int k = 0; k < instances; ++k) {
    const SigmaSpectrum spec = random_spectrum(rng);
    double z = zdist(rng);
    while (std::abs(z * z - 1.0) < 0.05) z = zdist(rng);
    const double w = std::exp(logw(rng));
    const double sw = std::sqrt(w), z2 = z * z;
    ++rep.instances;
    std::ostringstream tag;
    tag << "instance " << k << " (n=" << spec.n() << ", |z|=" << z << ", w=" << w << "): ";
    try {
      const CubicFactorization cf = cubic_factorize(w, spec, z);
      for (std::size_t i = 0; i < spec.n(); ++i) {
        const CubicFactor& f = cf.factors[i];
        const double sig = spec.s[i] + z2;
        const double tol = slack * (1.0 + sig / sw + z);
        const double c_lo = (-sig + std::sqrt(sig * sig + 4.0 * w * z2)) / (2.0 * sw);
        const double ab_max = 2.0 * (sig + sw * z) / w, c_max = (sig + sw * z) / w;
        if (!(f.a > std::max(z, sig / sw) - tol && f.a < sig / sw + z + tol)) note(rep, tag.str() + "a bound");
        if (!(f.b > 0.0 && f.b < std::min(z, z2 / sw) + tol)) note(rep, tag.str() + "b bound");
        if (!(f.c > c_lo - tol && f.c < z + tol)) note(rep, tag.str() + "c bound");
        if (!(f.A > 0.0 && f.A <= ab_max * (1 + slack))) note(rep, tag.str() + "A bound");
        if (!(f.B > 0.0 && f.B <= ab_max * (1 + slack))) note(rep, tag.str() + "B bound");
        if (!(f.C > 0.0 && f.C <= c_max * (1 + slack))) note(rep, tag.str() + "C bound");
        if (i > 0) {
          const CubicFactor& g = cf.factors[i - 1];
          if (!(f.a < g.a)) note(rep, tag.str() + "a ordering");
          if (!(f.b > g.b)) note(rep, tag.str() + "b ordering");
          if (!(f.c > g.c)) note(rep, tag.str() + "c ordering");
        }
      }
      const CriticalPointSet set = critical_points(w, spec, z);
      if (!set.ordering_ok) note(rep, tag.str() + "critical value ordering");
      if (!set.bound_ok) note(rep, tag.str() + "critical value bound");
      rep.max_ratio = std::max(rep.max_ratio, set.bound_ratio);
    } catch (const std::exception& e) {
      note(rep, tag.str() + e.what());
    }
  }
  return rep;
}

namespace {

RealMatrix random_matrix(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (double& x : a.row(i)) x = g(rng);
  return a;
}

// Greedy nearest matching; both lists have the same length.
double match_error(std::vector<cplx> got, const std::vector<cplx>& want) {
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

SweepReport kernel_sweep(int instances, std::uint64_t seed) {
  SweepReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(2, 64);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < instances; ++k) {
    ++rep.instances;
    const std::string tag = "instance " + std::to_string(k) + ": ";
    try {
      // symmetric eigensolver
      const std::size_t n = std::size_t(size(rng));
      RealMatrix a = random_matrix(n, n, rng);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
      const linalg::SymmetricEigen se = linalg::symmetric_eigen(a);
      RealMatrix vl = se.vectors;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) vl(i, j) *= se.values[j];
      const double scale = linalg::spectral_norm(a);
      if (linalg::spectral_norm(linalg::subtract(linalg::multiply(a, se.vectors), vl)) > 1e-10 * scale)
        note(rep, tag + "symmetric residual");
      if (linalg::orthonormality_defect(se.vectors) > 1e-12) note(rep, tag + "symmetric orthogonality");
      if (!std::is_sorted(se.values.begin(), se.values.end())) note(rep, tag + "symmetric ordering");

      // SVD of a rectangular matrix
      const std::size_t m = std::size_t(size(rng)), p = std::size_t(size(rng));
      const RealMatrix b = random_matrix(m, p, rng);
      const linalg::SVD d = linalg::svd(b);
      RealMatrix us = d.u;
      for (std::size_t i = 0; i < us.rows(); ++i)
        for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= d.sigma[j];
      if (linalg::spectral_norm(linalg::subtract(linalg::multiply(us, d.v.transpose()), b)) > 1e-10 * linalg::spectral_norm(b))
        note(rep, tag + "svd reconstruction");
      if (linalg::orthonormality_defect(d.u) > 1e-12 || linalg::orthonormality_defect(d.v) > 1e-12)
        note(rep, tag + "svd orthogonality");
      if (!std::is_sorted(d.sigma.rbegin(), d.sigma.rend()) || d.sigma.back() < 0.0) note(rep, tag + "svd ordering");

      // nonsymmetric eigenvalues with known spectrum: Q R Qᵀ, R quasi-triangular
      RealMatrix r(n, n);
      std::vector<cplx> want;
      for (std::size_t i = 0; i < n;) {
        if (i + 1 < n && unif(rng) > 0.0) {
          const double re = unif(rng), im = 0.2 + std::abs(unif(rng));
          r(i, i) = r(i + 1, i + 1) = re;
          r(i, i + 1) = im;
          r(i + 1, i) = -im;
          want.emplace_back(re, im);
          want.emplace_back(re, -im);
          i += 2;
        } else {
          r(i, i) = 2.0 * unif(rng);
          want.emplace_back(r(i, i), 0.0);
          i += 1;
        }
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j) r(i, j) = 0.3 * unif(rng) / std::sqrt(double(n));
      const RealMatrix q = linalg::qr_haar(n, rng);
      const RealMatrix g = linalg::multiply(linalg::multiply(q, r), q.transpose());
      const std::vector<cplx> ev = linalg::general_eigenvalues(g);
      if (ev.size() != n || match_error(ev, want) > 1e-7) note(rep, tag + "general eigenvalues");
      double trace = 0.0;
      cplx sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) trace += g(i, i);
      for (const cplx e : ev) sum += e;
      if (std::abs(sum - trace) > 1e-10 * (1.0 + std::abs(trace))) note(rep, tag + "eigenvalue trace");
      if (linalg::orthonormality_defect(q) > 1e-12) note(rep, tag + "haar orthogonality");

      // companion roots of a polynomial with known, separated roots
      const int degree = 2 + int(rng() % 7);
      std::vector<cplx> roots;
      while (int(roots.size()) < degree) {
        const cplx c(unif(rng), unif(rng));
        bool far = true;
        for (const cplx x : roots) far = far && std::abs(x - c) > 0.15;
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
      if (match_error(linalg::companion_roots(coeffs), roots) > 1e-8) note(rep, tag + "companion roots");

      // Householder QR of a tall matrix
      const std::size_t rows = std::max(m, p), cols = std::min(m, p);
      const RealMatrix t = random_matrix(rows, cols, rng);
      const linalg::QR qr = linalg::householder_qr(t);
      if (linalg::spectral_norm(linalg::subtract(linalg::multiply(qr.q, qr.r), t)) > 1e-10 * linalg::spectral_norm(t))
        note(rep, tag + "qr reconstruction");
      if (linalg::orthonormality_defect(qr.q) > 1e-12) note(rep, tag + "qr orthogonality");
      for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (qr.r(i, j) != 0.0) note(rep, tag + "qr triangularity");
    } catch (const std::exception& e) {
      note(rep, tag + e.what());
    }
  }
  return rep;
}

}  // namespace txlaw
