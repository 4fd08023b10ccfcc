#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "txlaw/master.hpp"
#include "txlaw/support.hpp"

namespace txlaw {

struct TableNode {
  double x = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double weight = 0.0;
};

// One Gauss–Legendre panel in the variable u with x = origin + dir·h·u²,
// u ∈ [u0, u1]. Nodes of the panel are nodes[first, first + order).
struct TablePanel {
  double origin = 0.0;
  double dir = 1.0;
  double h = 0.0;
  double u0 = 0.0, u1 = 0.0;
  int order = 0;
  std::size_t first = 0;
  double x_lo = 0.0, x_hi = 0.0;
  double mass_before = 0.0;  // ρ₂ mass below x_lo
  double mass = 0.0;         // ρ₂ mass of the panel
  std::vector<double> coeffs;  // Legendre coefficients of ρ₂ |dx/dt|
};

struct TableOptions {
  int resolution = 2000;
  int panel_order = 64;
  int graded_levels = 14;  // geometric refinement toward x = 0
  int graded_order = 24;
  double mass_tolerance = 1e-3;
  double x_min = 0.0;  // optional window; nodes outside are dropped
  double x_max = std::numeric_limits<double>::infinity();
  int threads = 1;
  SupportOptions support;
};

struct DensityTable {
  double z_mod = 0.0;
  std::vector<TableNode> nodes;
  std::vector<TablePanel> panels;  // ascending in x
  double total_mass = 0.0;         // ∫ρ₂
  double total_mass1 = 0.0;        // ∫ρ₁
  double mass_deficit = 0.0;       // 1 − total_mass
  SupportProfile profile;
};

DensityTable tabulate_density(const SigmaSpectrum& spec, double z_mod, const TableOptions& opts = {});
DensityTable tabulate_density(const SigmaSpectrum& spec, const SupportProfile& profile,
                              const TableOptions& opts = {});

// ∫₀^x ρ₂ from the panel interpolants.
double cdf(const DensityTable& table, double x);

struct QuantileTable {
  long N = 0;
  std::vector<double> gamma;  // γ₁ ≤ … ≤ γ_N
};

QuantileTable quantiles(const DensityTable& table, long N);

struct Integral {
  double value = 0.0;
  double error = 0.0;  // from trailing Legendre coefficients
};

// ∫ log x · ρ₂(x) dx
Integral log_potential(const DensityTable& table);
Integral log_potential(const SigmaSpectrum& spec, double z_mod, const TableOptions& opts = {});

struct StieltjesReport {
  double max_rel1 = 0.0;  // ρ₁ against m₁c
  double max_rel2 = 0.0;  // ρ₂ against m₂c
  double error_estimate = 0.0;
  double tolerance = 0.0;
  bool resolved = true;  // false when error_estimate > tolerance
};

StieltjesReport verify_stieltjes(const DensityTable& table, const SigmaSpectrum& spec,
                                 const std::vector<std::complex<double>>& w_samples, double tolerance = 1e-4,
                                 const SolverOptions& solver = {});

struct RadialOptions {
  double step = 0.005;
  double z_band_min = 0.05;
  double kink_threshold = 0.05;  // jump in χ̃ between neighbours
  int threads = 1;
  TableOptions table;
};

RadialOptions default_radial_options();

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> U;    // NaN in the hole
  std::vector<double> chi;  // NaN where the stencil touches the hole
  std::vector<double> F;
  std::vector<bool> kink;
  double hole_lo = 0.0, hole_hi = 0.0;  // excluded r interval
  double step = 0.0;
};

RadialProfile chi_tilde(const SigmaSpectrum& spec, double r_min, double r_max, const RadialOptions& opts);

struct RadialConsistency {
  double max_gap = 0.0;     // max |F − 2∫₀ʳ ρχ̃ dρ|
  double total_mass = 0.0;  // 2∫ r χ̃ dr including the hole mass
};

// Compares (r/2)U′ with 2∫ ρ χ̃ dρ; the hole contributes F(hole_hi) − F(hole_lo)
// and the disk below r_min contributes χ̃(r_min) r_min².
RadialConsistency radial_consistency(const RadialProfile& profile);

// Linear interpolation of χ̃ on the profile grid; NaN in the hole.
double interpolate_chi(const RadialProfile& profile, double r);

}  // namespace txlaw
