#include "txlaw/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "txlaw/error.hpp"
#include "txlaw/linalg.hpp"
#include "txlaw/parallel.hpp"

namespace txlaw {

namespace {

// Bracketing or refinement failed; find_edges retries on a finer grid.
struct BracketFailure : NumericalError {
  using NumericalError::NumericalError;
};

SolverOptions solver_for(const SupportOptions& opts) {
  SolverOptions s = opts.density.solver;
  s.diagnostic = s.diagnostic || opts.diagnostic;
  s.z_band_min = opts.z_band_min;
  return s;
}

DensityOptions density_for(const SupportOptions& opts) {
  DensityOptions d = opts.density;
  d.solver = solver_for(opts);
  return d;
}

}  // namespace

std::string to_string(EdgeSide side) { return side == EdgeSide::lower ? "lower" : "upper"; }

std::vector<double> real_poles(double w, const SigmaSpectrum& spec, double z_mod) {
  std::vector<double> out;
  if (z_mod > 0.0) {
    for (const auto& f : cubic_factorize(w, spec, z_mod).factors) {
      out.push_back(f.a);
      out.push_back(f.b);
      out.push_back(-f.c);
    }
  } else {
    out.push_back(0.0);
    for (double s : spec.s) out.push_back(s / std::sqrt(w));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

CriticalPointSet critical_points(double w, const SigmaSpectrum& spec, double z_mod, double tau) {
  if (!(w > 0.0)) throw InputError("critical_points: w must be positive");
  if (!(z_mod > 0.0)) throw InputError("critical_points: |z| must be positive");
  const double sw = std::sqrt(w);
  const double z2 = z_mod * z_mod;
  const MasterFunction F(spec, z_mod);
  const CubicFactorization cf = cubic_factorize(w, spec, z_mod);

  CriticalPointSet out;
  out.w = w;
  out.z_mod = z_mod;
  for (const auto& f : cf.factors) {
    out.poles_pos.push_back(f.a);
    out.poles_pos.push_back(f.b);
    out.poles_neg.push_back(f.c);
  }
  std::sort(out.poles_pos.begin(), out.poles_pos.end());
  std::sort(out.poles_neg.begin(), out.poles_neg.end());
  std::vector<double> poles;
  for (double y : out.poles_neg) poles.push_back(-y);
  poles.insert(poles.end(), out.poles_pos.begin(), out.poles_pos.end());
  std::sort(poles.begin(), poles.end());

  // Numerator of ∂_m f after clearing Π pᵢ².
  const std::size_t n = spec.n();
  const Poly r{0.0, -z2, 0.0, 1.0};
  const Poly dr{-z2, 0.0, 3.0};
  std::vector<Poly> p(n), dp(n), q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sigma = spec.s[i] + z2;
    p[i] = {z2 * z2, -sw * z2, -sigma, sw};
    dp[i] = {-sw * z2, -2.0 * sigma, 3.0 * sw};
    q[i] = poly_mul(p[i], p[i]);
  }
  Poly num{1.0};
  for (const auto& qi : q) num = poly_mul(num, qi);
  for (std::size_t i = 0; i < n; ++i) {
    Poly term = poly_add(poly_mul(dr, p[i]), poly_scale(poly_mul(r, dp[i]), -1.0));
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) term = poly_mul(term, q[j]);
    num = poly_add(num, poly_scale(term, F.coefficient(i)));
  }
  const auto roots = linalg::companion_roots(std::span<const cplx>(num));

  std::vector<double> found;
  for (const cplx& root : roots) {
    if (std::abs(root.imag()) > 1e-7 * (1.0 + std::abs(root))) continue;
    double x = root.real();
    bool ok = true;
    try {
      for (int it = 0; it < 30; ++it) {
        const FDerivatives d = F.derivatives(sw, x);
        const double step = d.dm.real() / d.dmm.real();
        if (!std::isfinite(step)) break;
        x -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
      }
    } catch (const NumericalError&) {
      ok = false;
    }
    if (!ok || !std::isfinite(x)) continue;
    bool close = false;
    for (double pole : poles)
      if (std::abs(x - pole) <= 1e-8 * (1.0 + std::abs(pole))) close = true;
    for (double y : found)
      if (std::abs(x - y) <= 1e-9 * (1.0 + std::abs(x))) close = true;
    if (!close) found.push_back(x);
  }

  out.occupancy.assign(3 * n + 1, 0);
  for (double x : found) {
    const int j = int(std::lower_bound(poles.begin(), poles.end(), x) - poles.begin());
    ++out.occupancy[j];
    out.points.push_back({x, F.value(sw, x).real(), j - int(n)});
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.m > b.m; });

  std::ostringstream why;
  for (std::size_t j = 0; j < out.occupancy.size(); ++j) {
    const int c = out.occupancy[j];
    const bool unbounded = j == 0 || j == out.occupancy.size() - 1;
    if ((unbounded && c != 1) || (!unbounded && c != 0 && c != 2))
      why << " interval " << int(j) - int(n) << " holds " << c << " critical points;";
  }
  if (!why.str().empty()) {
    std::ostringstream msg;
    msg << "critical_points: occupancy violation at w = " << w << ", |z| = " << z_mod << ":" << why.str();
    throw NumericalError(msg.str());
  }

  const double scale = 1.0 / (tau * sw) + z_mod;
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    const double hk = out.points[k].h;
    out.bound_ratio = std::max(out.bound_ratio, std::abs(hk + sw) / scale);
    if (k + 1 < out.points.size()) {
      const double hn = out.points[k + 1].h;
      if (hk < hn - 1e-9 * (1.0 + std::abs(hk) + std::abs(hn))) out.ordering_ok = false;
    }
  }
  out.bound_ok = out.bound_ratio <= kCriticalValueC0;
  return out;
}

bool in_support_by_critical_values(const CriticalPointSet& set) {
  if (set.points.empty()) return false;
  const double h_first = set.points.front().h;
  const double h_last = set.points.back().h;
  if (0.0 > h_first || 0.0 < h_last) return false;
  // Bounded intervals: local min (smaller m) then local max (larger m).
  for (std::size_t k = 1; k + 2 < set.points.size(); ++k) {
    const auto& hi = set.points[k];
    const auto& lo = set.points[k + 1];
    if (hi.interval != lo.interval) continue;
    if (lo.h < 0.0 && 0.0 < hi.h) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

double default_scan_max(const SigmaSpectrum& spec, double z_mod) {
  return 4.0 * (spec.s.front() + z_mod * z_mod + 1.0);
}

bool support_indicator(double E, const SigmaSpectrum& spec, double z_mod, const SupportOptions& opts) {
  if (!(E > 0.0)) throw InputError("support_indicator: E must be positive");
  if (!opts.diagnostic) check_z_band(z_mod, opts.z_band_min);
  return density_at(E, z_mod, spec, density_for(opts)).rho1 > opts.density_floor;
}

double small_w_t(const SigmaSpectrum& spec, double z_mod, double tau) {
  const double z2 = z_mod * z_mod;
  if (z2 > 1.0 - tau) {
    std::ostringstream why;
    why << "small_w_t: |z| = " << z_mod << " too close to 1 (needs |z|^2 <= 1 - " << tau << ")";
    throw DomainError(why.str());
  }
  const auto h = [&](double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.n(); ++i)
      acc += spec.weight(i) * (t + z2 - spec.s[i]) / ((spec.s[i] + z2) * t + z2 * z2);
    return acc;
  };
  double lo = 0.0, hi = 1.0;
  while (h(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("small_w_t: no sign change");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

namespace {

struct Refined {
  double e = 0.0;
  double m = 0.0;
  bool ok = false;
};

// 2D Newton on (f, ∂_m f) = 0 over real (√w, m).
Refined refine_edge(const MasterFunction& F, double s, double m) {
  Refined out;
  int settled = 0;
  try {
    for (int it = 0; it < 80; ++it) {
      const FDerivatives d = F.derivatives(s, m);
      const double f1 = d.f.real(), f2 = d.dm.real();
      const double a = d.ds.real(), b = d.dm.real(), c = d.dsm.real(), dd = d.dmm.real();
      const double det = a * dd - b * c;
      if (det == 0.0 || !std::isfinite(det)) return out;
      const double ds = (f1 * dd - b * f2) / det;
      const double dm = (a * f2 - c * f1) / det;
      s -= ds;
      m -= dm;
      if (!(s > 0.0) || !std::isfinite(m)) return out;
      if (std::abs(ds) <= 1e-15 * s && std::abs(dm) <= 1e-15 * (1.0 + std::abs(m))) {
        if (++settled >= 2) break;
      }
    }
  } catch (const NumericalError&) {
    return out;
  }
  out.e = s * s;
  out.m = m;
  out.ok = true;
  return out;
}

EdgeInfo describe_edge(const MasterFunction& F, const SigmaSpectrum& spec, double z_mod, double e, double m,
                       EdgeSide side) {
  EdgeInfo info;
  info.e = e;
  info.m = m;
  info.side = side;
  const FDerivatives d = F.derivatives(std::sqrt(e), m);
  info.f_residual = std::abs(d.f);
  info.dm_residual = std::abs(d.dm);
  info.d2f = d.dmm.real();
  info.pole_distance = std::numeric_limits<double>::infinity();
  for (double pole : real_poles(e, spec, z_mod)) info.pole_distance = std::min(info.pole_distance, std::abs(m - pole));
  return info;
}

SupportProfile scan_support(const SigmaSpectrum& spec, double z_mod, const SupportOptions& opts, int points) {
  const double lo = opts.scan_min;
  const double hi = opts.scan_max > 0.0 ? opts.scan_max : default_scan_max(spec, z_mod);
  if (!(hi > lo) || points < 2) throw InputError("find_edges: invalid scan window");
  const DensityOptions dopts = density_for(opts);
  const double ratio = std::pow(hi / lo, 1.0 / double(points - 1));

  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = lo * std::pow(hi / lo, double(k) / double(points - 1));
  grid.back() = hi;
  std::vector<char> inside(points);
  parallel_for(std::size_t(points), opts.threads, [&](std::size_t k) {
    inside[k] = density_at(grid[k], z_mod, spec, dopts).rho1 > opts.density_floor;
  });
  if (inside.back()) throw NumericalError("find_edges: support reaches scan_max; increase the scan window");
  if (inside.front() && z_mod >= 1.0)
    throw NumericalError("find_edges: support reaches the scan floor although |z| > 1");

  const MasterFunction F(spec, z_mod);
  const auto indicator = [&](double x) { return density_at(x, z_mod, spec, dopts).rho1 > opts.density_floor; };

  std::vector<int> transitions;
  for (int k = 0; k + 1 < points; ++k)
    if (inside[k] != inside[k + 1]) transitions.push_back(k);

  std::vector<EdgeInfo> edges(transitions.size());
  parallel_for(transitions.size(), opts.threads, [&](std::size_t t) {
    const int k = transitions[t];
    double a = grid[k], b = grid[k + 1];
    const bool rising = !inside[k];
    while (b - a > opts.bisect_width) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (indicator(mid) == rising ? b : a) = mid;
    }
    const double mid = 0.5 * (a + b);
    const SolverOptions sopts = solver_for(opts);
    const MasterSolution sol = solve_mc(SpectralParameter::make({mid, dopts.eta0}, z_mod), spec, sopts);
    const Refined r = refine_edge(F, std::sqrt(mid), sol.m_c.real());
    const double slack = 0.5 * (grid[k + 1] - grid[k]);
    if (!r.ok || r.e < grid[k] - slack || r.e > grid[k + 1] + slack) {
      std::ostringstream why;
      why << "find_edges: edge refinement failed near x = " << mid;
      throw BracketFailure(why.str());
    }
    edges[t] = describe_edge(F, spec, z_mod, r.e, r.m, rising ? EdgeSide::lower : EdgeSide::upper);
  });

  SupportProfile out;
  out.z_mod = z_mod;
  out.scan_points = points;
  out.scan_min = lo;
  out.scan_max = hi;
  out.grid_ratio = ratio;
  out.edge_epsilon = opts.edge_epsilon;

  // Edges come in ascending order; pair them into bands.
  std::size_t idx = 0;
  std::vector<Band> bands;
  if (inside.front()) {
    if (edges.empty() || edges[0].side != EdgeSide::upper)
      throw BracketFailure("find_edges: zero band without an upper edge");
    bands.push_back({0.0, edges[0].e});
    idx = 1;
  }
  for (; idx < edges.size(); idx += 2) {
    if (idx + 1 >= edges.size() || edges[idx].side != EdgeSide::lower || edges[idx + 1].side != EdgeSide::upper)
      throw BracketFailure("find_edges: edges do not alternate lower/upper");
    bands.push_back({edges[idx].e, edges[idx + 1].e});
  }
  for (std::size_t b = 1; b < bands.size(); ++b)
    if (!(bands[b].lo > bands[b - 1].hi)) throw BracketFailure("find_edges: overlapping bands");

  std::reverse(bands.begin(), bands.end());
  std::reverse(edges.begin(), edges.end());
  out.bands = bands;
  out.edges = edges;
  if (inside.front() && z_mod < 1.0) {
    ZeroEdge ze;
    ze.t = small_w_t(spec, z_mod, opts.tau);
    ze.amplitude1 = std::sqrt(ze.t) / std::numbers::pi;
    ze.amplitude2 = std::sqrt(ze.t) / (std::numbers::pi * (ze.t + z_mod * z_mod));
    out.zero_edge = ze;
  }
  for (std::size_t k = 0; k < out.edges.size(); ++k)
    out.edges[k].regular = check_edge_regularity(out, k, opts.edge_epsilon).regular;
  return out;
}

}  // namespace

SupportProfile find_edges(const SigmaSpectrum& spec, double z_mod, const SupportOptions& opts) {
  if (!opts.diagnostic) check_z_band(z_mod, opts.z_band_min);
  try {
    return scan_support(spec, z_mod, opts, opts.scan_points);
  } catch (const BracketFailure&) {
    SupportProfile p = scan_support(spec, z_mod, opts, 4 * opts.scan_points);
    p.attempts = 2;
    return p;
  }
}

// ---------------------------------------------------------------------------

RegularityReport check_edge_regularity(const EdgeInfo& edge, double epsilon, const std::vector<double>& other_edges) {
  RegularityReport rep;
  rep.epsilon = epsilon;
  rep.pole_distance = edge.pole_distance;
  rep.d2f = edge.d2f;
  rep.neighbor_gap = std::numeric_limits<double>::infinity();
  for (double e : other_edges) rep.neighbor_gap = std::min(rep.neighbor_gap, std::abs(e - edge.e));
  rep.pole_ok = rep.pole_distance >= epsilon;
  rep.d2f_ok = std::abs(rep.d2f) >= epsilon;
  rep.gap_ok = rep.neighbor_gap >= epsilon;
  rep.regular = rep.pole_ok && rep.d2f_ok && rep.gap_ok;
  return rep;
}

RegularityReport check_edge_regularity(const SupportProfile& profile, std::size_t edge_index, double epsilon) {
  std::vector<double> others;
  for (std::size_t k = 0; k < profile.edges.size(); ++k)
    if (k != edge_index) others.push_back(profile.edges[k].e);
  if (profile.zero_edge) others.push_back(0.0);
  return check_edge_regularity(profile.edges.at(edge_index), epsilon, others);
}

bool check_bulk_regularity(const Band& band, const SigmaSpectrum& spec, double z_mod, double tau_prime, double c,
                           const DensityOptions& opts) {
  if (!(band.hi - band.lo > 2.0 * tau_prime)) throw InputError("check_bulk_regularity: band too narrow for tau'");
  const double a = band.lo + tau_prime, b = band.hi - tau_prime;
  const int points = 200;
  double lowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double x = a + (b - a) * double(k) / double(points - 1);
    lowest = std::min(lowest, density_at(x, z_mod, spec, opts).rho1);
  }
  return lowest >= c;
}

namespace {

double fit_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
  const double n = double(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

template <class At>
double exponent_fit(At x_of_delta, const SigmaSpectrum& spec, double z_mod, const DensityOptions& opts) {
  std::vector<double> lx, ly;
  for (int k = 0; k < 20; ++k) {
    const double delta = 1e-4 * std::pow(100.0, double(k) / 19.0);
    const double rho = density_at(x_of_delta(delta), z_mod, spec, opts).rho1;
    if (!(rho > 0.0)) throw NumericalError("edge_exponent_fit: density vanished inside the band");
    lx.push_back(std::log(delta));
    ly.push_back(std::log(rho));
  }
  return fit_slope(lx, ly);
}

}  // namespace

double edge_exponent_fit(const EdgeInfo& edge, const SigmaSpectrum& spec, double z_mod, const DensityOptions& opts) {
  const double sign = edge.side == EdgeSide::lower ? 1.0 : -1.0;
  return exponent_fit([&](double d) { return edge.e + sign * d; }, spec, z_mod, opts);
}

double zero_edge_exponent_fit(const SigmaSpectrum& spec, double z_mod, const DensityOptions& opts) {
  return exponent_fit([](double d) { return d; }, spec, z_mod, opts);
}

}  // namespace txlaw
