#pragma once

#include <complex>
#include <string>
#include <vector>

#include "txlaw/polynomial.hpp"
#include "txlaw/sigma.hpp"

namespace txlaw {

// √w with Im √w > 0 off the positive axis and √w > 0 on it.
cplx upper_sqrt(cplx w);

struct SpectralParameter {
  cplx w;
  cplx sqrt_w;
  double z_mod = 0.0;

  static SpectralParameter make(cplx w, double z_mod);
};

struct FDerivatives {
  cplx f;
  cplx dm;   // ∂_m f
  cplx ds;   // ∂_{√w} f
  cplx dmm;  // ∂²_m f
  cplx dsm;  // ∂_{√w}∂_m f
};

// f(√w, m) = −√w + m + (1/K) Σ lᵢ sᵢ m(m² − |z|²)/pᵢ(m),
// pᵢ(m) = √w m³ − (sᵢ + |z|²) m² − √w |z|² m + |z|⁴.
// √w is an independent variable here so edges can be refined in (√w, m).
class MasterFunction {
 public:
  MasterFunction(const SigmaSpectrum& spec, double z_mod);

  cplx value(cplx sw, cplx m) const;
  FDerivatives derivatives(cplx sw, cplx m) const;
  cplx cubic(std::size_t i, cplx sw, cplx m) const;
  // Magnitude scale of the terms in f, for relative residuals.
  double term_scale(cplx sw, cplx m) const;

  std::size_t n() const { return s_.size(); }
  double z_mod() const { return z_; }
  double sigma(std::size_t i) const { return s_[i]; }
  double coefficient(std::size_t i) const { return c_[i]; }  // lᵢ sᵢ / K

 private:
  std::vector<double> s_;
  std::vector<double> c_;
  double z_ = 0.0;
  double z2_ = 0.0;
};

cplx eval_f(const SpectralParameter& p, cplx m, const SigmaSpectrum& spec);
FDerivatives eval_f_derivatives(const SpectralParameter& p, cplx m, const SigmaSpectrum& spec);

struct CubicFactor {
  double a = 0.0, b = 0.0, c = 0.0;  // roots a > b > 0 > −c
  double A = 0.0, B = 0.0, C = 0.0;
};

struct CubicFactorization {
  double w = 0.0;
  double z_mod = 0.0;
  double constant = 0.0;  // (1/K) Σ lᵢ sᵢ / √w
  std::vector<CubicFactor> factors;
};

CubicFactorization cubic_factorize(double w, const SigmaSpectrum& spec, double z_mod);

// −√w + m + constant + (1/K) Σ lᵢ sᵢ (A/(m−a) + B/(m−b) + C/(m+c))
double eval_f_partial_fractions(const CubicFactorization& cf, const SigmaSpectrum& spec, double m);

// P_w(m) = (m − √w) Πᵢ pᵢ + (1/K) Σᵢ lᵢ sᵢ m(m² − |z|²) Π_{j≠i} pⱼ, degree 3n+1.
Poly build_polynomial(const SpectralParameter& p, const SigmaSpectrum& spec);

enum class SolveMethod { polynomial, newton_continuation };
std::string to_string(SolveMethod m);

struct SolverOptions {
  double tolerance = 1e-12;
  int max_newton = 50;
  double z_band_min = 0.05;
  bool diagnostic = false;  // skip the excluded-band check
};

struct MasterSolution {
  SpectralParameter parameter;
  cplx m_c;
  cplx m1c;
  cplx m2c;
  double residual = 0.0;
  int n_candidate_roots = 0;
  SolveMethod method = SolveMethod::polynomial;
  int iterations = 0;
};

// 1/m₂ = −w(1 + m₁) + |z|²/(1 + m₁)
cplx m2_from_m1(cplx m1, const SpectralParameter& p);

MasterSolution solve_mc(const SpectralParameter& p, const SigmaSpectrum& spec, const SolverOptions& opts = {});

// Newton continuation in η from Im w = max(1, Im w) down to Im w.
MasterSolution solve_mc_continuation(const SpectralParameter& p, const SigmaSpectrum& spec,
                                     const SolverOptions& opts = {});

struct DensityOptions {
  double eta0 = 1e-7;
  // η₀ is capped at eta_rel·x so the ratio η/x stays small near x = 0.
  double eta_rel = 1e-3;
  SolverOptions solver;
};

struct DensityPoint {
  double x = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double err1 = 0.0;  // spread of the Richardson extrapolation
  double err2 = 0.0;
};

// ρ_{1,2}(x) = lim Im m_{1,2c}(x + iη)/π, by three-point Richardson
// extrapolation over η ∈ {η₀, η₀/2, η₀/4}.
DensityPoint density_at(double x, double z_mod, const SigmaSpectrum& spec, const DensityOptions& opts = {});

}  // namespace txlaw
