#include "txlaw/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "txlaw/error.hpp"
#include "txlaw/parallel.hpp"
#include "txlaw/quadrature.hpp"

namespace txlaw {

namespace {

struct PanelSpec {
  double origin, dir, h, u0, u1;
  int order;
};

double panel_x(const PanelSpec& p, double u) { return p.origin + p.dir * p.h * u * u; }

void add_half(std::vector<PanelSpec>& out, double origin, double dir, double h, int per_half, bool graded,
              const TableOptions& opts) {
  int order = opts.panel_order;
  int count = 1;
  if (per_half >= opts.panel_order) {
    count = std::max(1, int(std::lround(double(per_half) / double(opts.panel_order))));
  } else {
    order = std::max(per_half, 2);
  }
  const double du = 1.0 / double(count);
  for (int k = 0; k < count; ++k) {
    const double u0 = k * du, u1 = (k + 1) * du;
    if (k == 0 && graded) {
      double lo = 0.0;
      for (int g = opts.graded_levels; g >= 1; --g) {
        const double hi = u1 * std::ldexp(1.0, -g);
        out.push_back({origin, dir, h, lo, hi, opts.graded_order});
        lo = hi;
      }
      out.push_back({origin, dir, h, lo, u1, order});
    } else {
      out.push_back({origin, dir, h, u0, u1, order});
    }
  }
}

DensityOptions density_options(const TableOptions& opts, double z_mod) {
  DensityOptions d = opts.support.density;
  d.solver.diagnostic = d.solver.diagnostic || opts.support.diagnostic;
  d.solver.z_band_min = opts.support.z_band_min;
  (void)z_mod;
  return d;
}

}  // namespace

DensityTable tabulate_density(const SigmaSpectrum& spec, double z_mod, const TableOptions& opts) {
  SupportOptions sopts = opts.support;
  if (sopts.threads < opts.threads) sopts.threads = opts.threads;
  return tabulate_density(spec, find_edges(spec, z_mod, sopts), opts);
}

DensityTable tabulate_density(const SigmaSpectrum& spec, const SupportProfile& profile, const TableOptions& opts) {
  if (opts.resolution < 4) throw InputError("tabulate_density: resolution too small");
  DensityTable table;
  table.z_mod = profile.z_mod;
  table.profile = profile;

  std::vector<PanelSpec> specs;
  const int bands = int(profile.bands.size());
  const int per_half = bands > 0 ? opts.resolution / (2 * bands) : 0;
  for (const Band& b : profile.bands) {
    const double h = 0.5 * (b.hi - b.lo);
    const bool graded = b.lo < 1e-2 * (b.hi - b.lo);
    add_half(specs, b.lo, 1.0, h, per_half, graded, opts);
    add_half(specs, b.hi, -1.0, h, per_half, false, opts);
  }

  // Clip to the requested window.
  std::vector<PanelSpec> kept;
  for (const auto& p : specs) {
    const double xa = panel_x(p, p.u0), xb = panel_x(p, p.u1);
    const double lo = std::min(xa, xb), hi = std::max(xa, xb);
    if (hi > opts.x_min && lo < opts.x_max) kept.push_back(p);
  }
  const bool windowed = opts.x_min > 0.0 || std::isfinite(opts.x_max);

  std::sort(kept.begin(), kept.end(), [](const PanelSpec& a, const PanelSpec& b) {
    return std::min(panel_x(a, a.u0), panel_x(a, a.u1)) < std::min(panel_x(b, b.u0), panel_x(b, b.u1));
  });

  for (const auto& p : kept) {
    const GaussRule& rule = gauss_legendre(p.order);
    TablePanel panel;
    panel.origin = p.origin;
    panel.dir = p.dir;
    panel.h = p.h;
    panel.u0 = p.u0;
    panel.u1 = p.u1;
    panel.order = p.order;
    panel.first = table.nodes.size();
    const double xa = panel_x(p, p.u0), xb = panel_x(p, p.u1);
    panel.x_lo = std::min(xa, xb);
    panel.x_hi = std::max(xa, xb);
    const double half = 0.5 * (p.u1 - p.u0);
    for (int k = 0; k < p.order; ++k) {
      const double u = p.u0 + half * (rule.x[k] + 1.0);
      TableNode node;
      node.x = panel_x(p, u);
      node.weight = rule.w[k] * half * 2.0 * p.h * u;
      table.nodes.push_back(node);
    }
    table.panels.push_back(std::move(panel));
  }

  const DensityOptions dopts = density_options(opts, profile.z_mod);
  parallel_for(table.nodes.size(), opts.threads, [&](std::size_t i) {
    TableNode& node = table.nodes[i];
    if (node.x < opts.x_min || node.x > opts.x_max) {
      node.weight = 0.0;
      return;
    }
    const DensityPoint d = density_at(node.x, profile.z_mod, spec, dopts);
    node.rho1 = d.rho1;
    node.rho2 = d.rho2;
  });

  double cumulative = 0.0;
  for (auto& panel : table.panels) {
    const GaussRule& rule = gauss_legendre(panel.order);
    std::vector<double> g(panel.order);
    double m1 = 0.0;
    for (int k = 0; k < panel.order; ++k) {
      const TableNode& node = table.nodes[panel.first + k];
      g[k] = node.rho2 * node.weight / rule.w[k];
      m1 += node.rho1 * node.weight;
    }
    panel.coeffs = legendre_coefficients(rule, g);
    panel.mass = 2.0 * panel.coeffs[0];
    panel.mass_before = cumulative;
    cumulative += panel.mass;
    table.total_mass1 += m1;
  }
  table.total_mass = cumulative;
  table.mass_deficit = 1.0 - cumulative;
  if (!windowed && !table.panels.empty() && std::abs(table.mass_deficit) > opts.mass_tolerance) {
    std::ostringstream why;
    why << "tabulate_density: mass " << cumulative << " deviates from 1 (missed band? rescan advised)";
    throw NumericalError(why.str());
  }
  return table;
}

// ---------------------------------------------------------------------------

namespace {

double panel_t(const TablePanel& p, double x) {
  const double u = std::sqrt(std::max(0.0, (x - p.origin) * p.dir / p.h));
  return 2.0 * (u - p.u0) / (p.u1 - p.u0) - 1.0;
}

double panel_x_of_t(const TablePanel& p, double t) {
  const double u = p.u0 + 0.5 * (p.u1 - p.u0) * (t + 1.0);
  return p.origin + p.dir * p.h * u * u;
}

// Mass of the panel below the point with parameter t.
double panel_mass_below(const TablePanel& p, double t) {
  const double a = legendre_antiderivative(p.coeffs, std::clamp(t, -1.0, 1.0));
  return p.dir > 0.0 ? a : p.mass - a;
}

}  // namespace

double cdf(const DensityTable& table, double x) {
  double acc = 0.0;
  for (const auto& p : table.panels) {
    if (x >= p.x_hi) {
      acc = p.mass_before + p.mass;
      continue;
    }
    if (x <= p.x_lo) break;
    return p.mass_before + panel_mass_below(p, panel_t(p, x));
  }
  return acc;
}

QuantileTable quantiles(const DensityTable& table, long N) {
  if (N < 1) throw InputError("quantiles: N must be positive");
  if (table.panels.empty()) throw InputError("quantiles: empty density table");
  if (std::abs(table.mass_deficit) > 1e-3) throw InputError("quantiles: table mass outside tolerance");
  QuantileTable out;
  out.N = N;
  out.gamma.resize(std::size_t(N));
  const double top = table.panels.back().x_hi;
  std::size_t pi = 0;
  for (long j = 1; j <= N; ++j) {
    const double target = double(j) / double(N);
    if (target > table.total_mass) {
      if (target - table.total_mass > 1e-6) {
        std::ostringstream why;
        why << "quantiles: j/N = " << target << " exceeds total mass " << table.total_mass;
        throw NumericalError(why.str());
      }
      out.gamma[j - 1] = top;
      continue;
    }
    while (pi + 1 < table.panels.size() && table.panels[pi].mass_before + table.panels[pi].mass < target) ++pi;
    const TablePanel& p = table.panels[pi];
    const double local = target - p.mass_before;
    // The mass below x grows with x; t runs with x when dir > 0.
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double mass = panel_mass_below(p, mid);
      const bool below = mass < local;
      if (p.dir > 0.0)
        (below ? lo : hi) = mid;
      else
        (below ? hi : lo) = mid;
    }
    out.gamma[j - 1] = std::clamp(panel_x_of_t(p, 0.5 * (lo + hi)), p.x_lo, p.x_hi);
  }
  for (long j = 1; j < N; ++j) out.gamma[j] = std::max(out.gamma[j], out.gamma[j - 1]);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class Fn>
Integral integrate_panels(const DensityTable& table, Fn value_of) {
  Integral out;
  for (const auto& p : table.panels) {
    const GaussRule& rule = gauss_legendre(p.order);
    std::vector<double> g(p.order);
    for (int k = 0; k < p.order; ++k) {
      const TableNode& node = table.nodes[p.first + k];
      g[k] = value_of(node) * node.weight / rule.w[k];
      out.value += value_of(node) * node.weight;
    }
    out.error += 2.0 * legendre_tail(legendre_coefficients(rule, g));
  }
  return out;
}

}  // namespace

Integral log_potential(const DensityTable& table) {
  return integrate_panels(table, [](const TableNode& n) { return std::log(n.x) * n.rho2; });
}

Integral log_potential(const SigmaSpectrum& spec, double z_mod, const TableOptions& opts) {
  return log_potential(tabulate_density(spec, z_mod, opts));
}

StieltjesReport verify_stieltjes(const DensityTable& table, const SigmaSpectrum& spec,
                                 const std::vector<std::complex<double>>& w_samples, double tolerance,
                                 const SolverOptions& solver) {
  StieltjesReport rep;
  rep.tolerance = tolerance;
  for (const auto& w : w_samples) {
    if (w.imag() < 0.05) throw InputError("verify_stieltjes: samples need Im w >= 0.05");
    const MasterSolution sol = solve_mc(SpectralParameter::make(w, table.z_mod), spec, solver);
    const auto part = [&](auto pick) {
      const Integral re = integrate_panels(table, [&](const TableNode& n) { return (pick(n) / (n.x - w)).real(); });
      const Integral im = integrate_panels(table, [&](const TableNode& n) { return (pick(n) / (n.x - w)).imag(); });
      return std::pair<std::complex<double>, double>({re.value, im.value}, re.error + im.error);
    };
    const auto [q1, e1] = part([](const TableNode& n) { return std::complex<double>(n.rho1); });
    const auto [q2, e2] = part([](const TableNode& n) { return std::complex<double>(n.rho2); });
    rep.max_rel1 = std::max(rep.max_rel1, std::abs(q1 - sol.m1c) / std::abs(sol.m1c));
    rep.max_rel2 = std::max(rep.max_rel2, std::abs(q2 - sol.m2c) / std::abs(sol.m2c));
    rep.error_estimate = std::max({rep.error_estimate, e1 / std::abs(sol.m1c), e2 / std::abs(sol.m2c)});
  }
  rep.resolved = rep.error_estimate <= tolerance;
  return rep;
}

// ---------------------------------------------------------------------------

RadialOptions default_radial_options() {
  RadialOptions o;
  o.table.resolution = 1024;
  o.table.support.scan_points = 600;
  return o;
}

RadialProfile chi_tilde(const SigmaSpectrum& spec, double r_min, double r_max, const RadialOptions& opts) {
  const double h = opts.step;
  if (!(h > 0.0) || h > 0.01) throw InputError("chi_tilde: step must lie in (0, 0.01]");
  if (!(r_min - 2.0 * h > 0.0) || !(r_max > r_min)) throw InputError("chi_tilde: invalid r range");
  const auto in_hole = [&](double r) { return std::abs(r * r - 1.0) < opts.z_band_min; };
  if (in_hole(r_min) || in_hole(r_max)) throw DomainError("chi_tilde: grid endpoint inside the excluded band");

  const int count = int(std::lround((r_max - r_min) / h)) + 1;
  const int total = count + 4;
  std::vector<double> rr(total), uu(total, std::nan(""));
  for (int k = 0; k < total; ++k) rr[k] = r_min + (k - 2) * h;

  TableOptions topts = opts.table;
  topts.support.z_band_min = opts.z_band_min;
  parallel_for(std::size_t(total), opts.threads, [&](std::size_t k) {
    if (in_hole(rr[k])) return;
    uu[k] = log_potential(spec, rr[k], topts).value;
  });

  RadialProfile prof;
  prof.step = h;
  prof.hole_lo = std::sqrt(std::max(0.0, 1.0 - opts.z_band_min));
  prof.hole_hi = std::sqrt(1.0 + opts.z_band_min);
  const double nan = std::nan("");
  for (int k = 2; k < total - 2; ++k) {
    prof.r.push_back(rr[k]);
    prof.U.push_back(uu[k]);
    const double um2 = uu[k - 2], um1 = uu[k - 1], u0 = uu[k], up1 = uu[k + 1], up2 = uu[k + 2];
    if (std::isnan(um2) || std::isnan(um1) || std::isnan(u0) || std::isnan(up1) || std::isnan(up2)) {
      prof.chi.push_back(nan);
      prof.F.push_back(nan);
      continue;
    }
    const double d1 = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * h);
    const double d2 = (-um2 + 16.0 * um1 - 30.0 * u0 + 16.0 * up1 - up2) / (12.0 * h * h);
    prof.chi.push_back(0.25 * (d2 + d1 / rr[k]));
    prof.F.push_back(0.5 * rr[k] * d1);
  }
  prof.kink.assign(prof.r.size(), false);
  for (std::size_t k = 0; k + 1 < prof.r.size(); ++k) {
    if (std::isnan(prof.chi[k]) || std::isnan(prof.chi[k + 1])) continue;
    if (std::abs(prof.chi[k + 1] - prof.chi[k]) > opts.kink_threshold) prof.kink[k] = prof.kink[k + 1] = true;
  }
  return prof;
}

RadialConsistency radial_consistency(const RadialProfile& p) {
  RadialConsistency out;
  double acc = std::nan("");
  std::size_t last = 0;
  for (std::size_t k = 0; k < p.r.size(); ++k) {
    if (std::isnan(p.chi[k])) continue;
    if (std::isnan(acc)) {
      acc = p.chi[k] * p.r[k] * p.r[k];
    } else if (k == last + 1) {
      acc += (p.r[k] - p.r[last]) * (p.r[k] * p.chi[k] + p.r[last] * p.chi[last]);
    } else {
      acc += p.F[k] - p.F[last];
    }
    out.max_gap = std::max(out.max_gap, std::abs(p.F[k] - acc));
    last = k;
  }
  out.total_mass = std::isnan(acc) ? 0.0 : acc;
  return out;
}

double interpolate_chi(const RadialProfile& p, double r) {
  if (p.r.empty() || r < p.r.front() || r > p.r.back()) return std::nan("");
  const double pos = (r - p.r.front()) / p.step;
  std::size_t k = std::min(std::size_t(pos), p.r.size() - 1);
  if (k + 1 >= p.r.size()) return p.chi[k];
  const double t = pos - double(k);
  return (1.0 - t) * p.chi[k] + t * p.chi[k + 1];
}

}  // namespace txlaw
