#include "txlaw/master.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "txlaw/error.hpp"
#include "txlaw/linalg.hpp"

namespace txlaw {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

bool finite(cplx x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

}  // namespace

cplx upper_sqrt(cplx w) {
  cplx s = std::sqrt(w);
  if (s.imag() < 0.0) s = -s;
  if (w.imag() == 0.0 && w.real() > 0.0) s = cplx(std::sqrt(w.real()), 0.0);
  return s;
}

SpectralParameter SpectralParameter::make(cplx w, double z_mod) {
  if (!finite(w)) throw InputError("spectral parameter: non-finite w");
  if (w.imag() < 0.0) throw InputError("spectral parameter: Im w must be nonnegative");
  if (!(z_mod >= 0.0) || !std::isfinite(z_mod)) throw InputError("spectral parameter: |z| must be nonnegative");
  return {w, upper_sqrt(w), z_mod};
}

// ---------------------------------------------------------------------------

MasterFunction::MasterFunction(const SigmaSpectrum& spec, double z_mod)
    : s_(spec.s), c_(spec.n()), z_(z_mod), z2_(z_mod * z_mod) {
  for (std::size_t i = 0; i < spec.n(); ++i) c_[i] = spec.weight(i) * spec.s[i];
}

cplx MasterFunction::cubic(std::size_t i, cplx sw, cplx m) const {
  const double sigma = s_[i] + z2_;
  return ((sw * m - sigma) * m - sw * z2_) * m + z2_ * z2_;
}

cplx MasterFunction::value(cplx sw, cplx m) const {
  const cplx r = m * (m * m - z2_);
  cplx acc = m - sw;
  for (std::size_t i = 0; i < s_.size(); ++i) {
    const cplx p = cubic(i, sw, m);
    if (std::abs(p) < kTiny) throw NumericalError("eval_f: pole proximity");
    acc += c_[i] * r / p;
  }
  return acc;
}

FDerivatives MasterFunction::derivatives(cplx sw, cplx m) const {
  const cplx r = m * (m * m - z2_);
  const cplx r1 = 3.0 * m * m - z2_;
  const cplx r2 = 6.0 * m;
  FDerivatives d{m - sw, 1.0, -1.0, 0.0, 0.0};
  for (std::size_t i = 0; i < s_.size(); ++i) {
    const double sigma = s_[i] + z2_;
    const cplx p = cubic(i, sw, m);
    if (std::abs(p) < kTiny) throw NumericalError("eval_f: pole proximity");
    const cplx pm = 3.0 * sw * m * m - 2.0 * sigma * m - sw * z2_;
    const cplx pmm = 6.0 * sw * m - 2.0 * sigma;
    const cplx ip = 1.0 / p;
    const cplx ip2 = ip * ip;
    const cplx num = r1 * p - r * pm;
    const double c = c_[i];
    d.f += c * r * ip;
    d.dm += c * num * ip2;
    d.ds += -c * r * r * ip2;
    d.dsm += c * (-2.0 * r * r1 * ip2 + 2.0 * r * r * pm * ip2 * ip);
    d.dmm += c * ((r2 * p - r * pmm) * ip2 - 2.0 * pm * num * ip2 * ip);
  }
  return d;
}

double MasterFunction::term_scale(cplx sw, cplx m) const {
  const cplx r = m * (m * m - z2_);
  double acc = std::abs(sw) + std::abs(m);
  for (std::size_t i = 0; i < s_.size(); ++i) {
    const cplx p = cubic(i, sw, m);
    if (std::abs(p) >= kTiny) acc += c_[i] * std::abs(r / p);
  }
  return acc;
}

cplx eval_f(const SpectralParameter& p, cplx m, const SigmaSpectrum& spec) {
  return MasterFunction(spec, p.z_mod).value(p.sqrt_w, m);
}

FDerivatives eval_f_derivatives(const SpectralParameter& p, cplx m, const SigmaSpectrum& spec) {
  return MasterFunction(spec, p.z_mod).derivatives(p.sqrt_w, m);
}

// ---------------------------------------------------------------------------

CubicFactorization cubic_factorize(double w, const SigmaSpectrum& spec, double z_mod) {
  if (!(w > 0.0)) throw InputError("cubic_factorize: w must be real and positive");
  if (!(z_mod > 0.0)) throw InputError("cubic_factorize: |z| = 0 is degenerate, evaluate f directly");
  const double sw = std::sqrt(w);
  const double z2 = z_mod * z_mod;
  CubicFactorization out;
  out.w = w;
  out.z_mod = z_mod;
  double total = 0.0;
  for (std::size_t i = 0; i < spec.n(); ++i) {
    const double coef = spec.weight(i) * spec.s[i];
    total += coef;
    const double sigma = spec.s[i] + z2;
    const double poly[4] = {z2 * z2, -sw * z2, -sigma, sw};
    auto roots = linalg::companion_roots(std::span<const double>(poly, 4));
    double x[3];
    for (int k = 0; k < 3; ++k) {
      if (std::abs(roots[k].imag()) > 1e-6 * (1.0 + std::abs(roots[k])))
        throw NumericalError("cubic_factorize: cubic without three real roots (internal error)");
      double t = roots[k].real();
      for (int it = 0; it < 3; ++it) {
        const double pv = ((sw * t - sigma) * t - sw * z2) * t + z2 * z2;
        const double dp = (3.0 * sw * t - 2.0 * sigma) * t - sw * z2;
        if (dp == 0.0) break;
        t -= pv / dp;
      }
      x[k] = t;
    }
    std::sort(x, x + 3);
    CubicFactor f;
    f.c = -x[0];
    f.b = x[1];
    f.a = x[2];
    if (!(f.a > f.b && f.b > 0.0 && f.c > 0.0))
      throw NumericalError("cubic_factorize: root signs violate a > b > 0 > -c (internal error)");
    const double Ap = (f.a * f.a - z2) / (sw * (f.a - f.b) * (f.a + f.c));
    const double Bp = (f.b * f.b - z2) / (sw * (f.b - f.a) * (f.b + f.c));
    const double Cp = (z2 - f.c * f.c) / (sw * (f.c + f.a) * (f.c + f.b));
    f.A = Ap * f.a;
    f.B = Bp * f.b;
    f.C = Cp * f.c;
    out.factors.push_back(f);
  }
  out.constant = total / sw;
  return out;
}

double eval_f_partial_fractions(const CubicFactorization& cf, const SigmaSpectrum& spec, double m) {
  double acc = -std::sqrt(cf.w) + m + cf.constant;
  for (std::size_t i = 0; i < cf.factors.size(); ++i) {
    const auto& f = cf.factors[i];
    const double coef = spec.weight(i) * spec.s[i];
    acc += coef * (f.A / (m - f.a) + f.B / (m - f.b) + f.C / (m + f.c));
  }
  return acc;
}

Poly build_polynomial(const SpectralParameter& p, const SigmaSpectrum& spec) {
  const cplx sw = p.sqrt_w;
  const double z2 = p.z_mod * p.z_mod;
  std::vector<Poly> cubics;
  for (std::size_t i = 0; i < spec.n(); ++i)
    cubics.push_back({cplx(z2 * z2), -sw * z2, cplx(-(spec.s[i] + z2)), sw});
  Poly prod{cplx(1.0)};
  for (const auto& c : cubics) prod = poly_mul(prod, c);
  Poly out = poly_mul({-sw, cplx(1.0)}, prod);
  const Poly r{cplx(0.0), cplx(-z2), cplx(0.0), cplx(1.0)};
  for (std::size_t i = 0; i < spec.n(); ++i) {
    Poly term = r;
    for (std::size_t j = 0; j < spec.n(); ++j)
      if (j != i) term = poly_mul(term, cubics[j]);
    out = poly_add(out, poly_scale(term, spec.weight(i) * spec.s[i]));
  }
  for (const cplx& c : out)
    if (!finite(c)) throw NumericalError("build_polynomial: coefficient overflow");
  return out;
}

std::string to_string(SolveMethod m) {
  return m == SolveMethod::polynomial ? "polynomial" : "newton-continuation";
}

cplx m2_from_m1(cplx m1, const SpectralParameter& p) {
  const cplx one_m1 = 1.0 + m1;
  if (std::abs(one_m1) < kTiny) throw NumericalError("m2_from_m1: 1 + m1 vanishes");
  const cplx denom = -p.w * one_m1 + p.z_mod * p.z_mod / one_m1;
  if (std::abs(denom) < kTiny) throw NumericalError("m2_from_m1: denominator vanishes");
  return 1.0 / denom;
}

// ---------------------------------------------------------------------------

namespace {

struct Polished {
  cplx m;
  double residual = 0.0;
  int iterations = 0;
  bool ok = false;
};

Polished newton(const MasterFunction& F, cplx sw, cplx m, int max_iter) {
  Polished out{m};
  try {
    for (int it = 0; it < max_iter; ++it) {
      const FDerivatives d = F.derivatives(sw, m);
      if (d.dm == cplx(0.0) || !finite(d.f)) return out;
      const cplx step = d.f / d.dm;
      m -= step;
      out.iterations = it + 1;
      if (!finite(m)) return out;
      if (std::abs(step) <= 4.0 * kEps * std::abs(m)) break;
    }
    out.m = m;
    out.residual = std::abs(F.value(sw, m));
    out.ok = std::isfinite(out.residual);
  } catch (const NumericalError&) {
    out.ok = false;
  }
  return out;
}

bool admissible(const SpectralParameter& p, cplx m) {
  const cplx m1 = m / p.sqrt_w - 1.0;
  return m1.imag() > 0.0 && (p.w * m1).imag() > 0.0;
}

bool near_pole(const MasterFunction& F, cplx sw, cplx m) {
  const double am = std::abs(m);
  const double z2 = F.z_mod() * F.z_mod();
  for (std::size_t i = 0; i < F.n(); ++i) {
    const double scale = std::max({std::abs(sw) * am * am * am, (F.sigma(i) + z2) * am * am,
                                   std::abs(sw) * z2 * am, z2 * z2});
    if (std::abs(F.cubic(i, sw, m)) <= 1e-8 * scale) return true;
  }
  return false;
}

double allowed_residual(const MasterFunction& F, cplx sw, cplx m, double tol) {
  return std::max(tol, 1e3 * kEps * F.term_scale(sw, m));
}

MasterSolution finish(const SpectralParameter& p, cplx m, double residual, int candidates, SolveMethod method,
                      int iterations) {
  MasterSolution s;
  s.parameter = p;
  s.m_c = m;
  s.m1c = m / p.sqrt_w - 1.0;
  s.m2c = m2_from_m1(s.m1c, p);
  s.residual = residual;
  s.n_candidate_roots = candidates;
  s.method = method;
  s.iterations = iterations;
  return s;
}

}  // namespace

MasterSolution solve_mc_continuation(const SpectralParameter& p, const SigmaSpectrum& spec,
                                     const SolverOptions& opts) {
  if (!(p.w.imag() > 0.0)) throw DomainError("solve_mc: Im w must be positive");
  if (!opts.diagnostic) check_z_band(p.z_mod, opts.z_band_min);
  const MasterFunction F(spec, p.z_mod);
  const double E = p.w.real();
  const double target = p.w.imag();
  double eta = std::max(1.0, target);
  eta = std::max(eta, std::abs(E));
  cplx w = {E, eta};
  cplx sw = upper_sqrt(w);
  cplx m = sw * (1.0 - 1.0 / w);
  int total = 0;
  while (true) {
    Polished step = newton(F, sw, m, opts.max_newton);
    total += step.iterations;
    if (!step.ok) throw NumericalError("solve_mc: continuation Newton step failed");
    m = step.m;
    if (eta <= target) break;
    eta = std::max(target, 0.9 * eta);
    w = {E, eta};
    sw = upper_sqrt(w);
  }
  const double res = std::abs(F.value(p.sqrt_w, m));
  if (!admissible(p, m)) throw DomainError("solve_mc: no admissible root (continuation left the half-plane)");
  if (res > allowed_residual(F, p.sqrt_w, m, opts.tolerance))
    throw NumericalError("solve_mc: continuation residual above tolerance");
  return finish(p, m, res, 1, SolveMethod::newton_continuation, total);
}

MasterSolution solve_mc(const SpectralParameter& p, const SigmaSpectrum& spec, const SolverOptions& opts) {
  if (!(p.w.imag() > 0.0)) throw DomainError("solve_mc: Im w must be positive");
  if (!opts.diagnostic) check_z_band(p.z_mod, opts.z_band_min);
  const MasterFunction F(spec, p.z_mod);
  const cplx sw = p.sqrt_w;
  const Poly P = build_polynomial(p, spec);
  const auto roots = linalg::companion_roots(std::span<const cplx>(P));

  std::vector<Polished> candidates;
  for (const cplx& root : roots) {
    if (near_pole(F, sw, root)) continue;
    Polished pol = newton(F, sw, root, opts.max_newton);
    if (!pol.ok || !admissible(p, pol.m)) continue;
    bool duplicate = false;
    for (const auto& c : candidates)
      if (std::abs(c.m - pol.m) <= 1e-9 * (1.0 + std::abs(pol.m))) duplicate = true;
    if (!duplicate) candidates.push_back(pol);
  }
  if (candidates.empty()) return solve_mc_continuation(p, spec, opts);

  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [](const Polished& a, const Polished& b) { return a.residual < b.residual; });
  if (candidates.size() > 1 && p.w.imag() >= 1e-6) {
    std::ostringstream why;
    why << "solve_mc: " << candidates.size() << " admissible roots at w = " << p.w.real() << "+" << p.w.imag()
        << "i, uniqueness violated";
    throw NumericalError(why.str());
  }
  if (best->residual > allowed_residual(F, sw, best->m, opts.tolerance))
    throw NumericalError("solve_mc: Newton polish did not reach the residual tolerance");
  return finish(p, best->m, best->residual, int(candidates.size()), SolveMethod::polynomial, best->iterations);
}

}  // namespace txlaw

namespace txlaw {

DensityPoint density_at(double x, double z_mod, const SigmaSpectrum& spec, const DensityOptions& opts) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InputError("density_at: x must be positive");
  const double eta = std::min(opts.eta0, opts.eta_rel * x);
  double im1[3], im2[3];
  for (int k = 0; k < 3; ++k) {
    const double e = eta / double(1 << k);
    const MasterSolution sol = solve_mc(SpectralParameter::make({x, e}, z_mod), spec, opts.solver);
    im1[k] = sol.m1c.imag();
    im2[k] = sol.m2c.imag();
  }
  const auto extrapolate = [](const double* v) { return (8.0 * v[2] - 6.0 * v[1] + v[0]) / 3.0; };
  DensityPoint out;
  out.x = x;
  const double r1 = extrapolate(im1), r2 = extrapolate(im2);
  out.rho1 = std::max(0.0, r1) / std::numbers::pi;
  out.rho2 = std::max(0.0, r2) / std::numbers::pi;
  out.err1 = std::abs(r1 - im1[2]) / std::numbers::pi;
  out.err2 = std::abs(r2 - im2[2]) / std::numbers::pi;
  return out;
}

}  // namespace txlaw
