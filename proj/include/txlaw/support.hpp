#pragma once

#include <optional>
#include <string>
#include <vector>

#include "txlaw/master.hpp"
#include "txlaw/sigma.hpp"

namespace txlaw {

struct CriticalPoint {
  double m = 0.0;
  double h = 0.0;    // f(√w, m)
  int interval = 0;  // −n … 2n
};

struct CriticalPointSet {
  double w = 0.0;
  double z_mod = 0.0;
  std::vector<double> poles_pos;  // x₁ < … < x₂ₙ, the aᵢ and bᵢ
  std::vector<double> poles_neg;  // y₁ < … < yₙ, the cᵢ
  std::vector<CriticalPoint> points;  // descending in m, so h₁ comes first
  std::vector<int> occupancy;         // slot j holds interval j − n
  bool ordering_ok = true;            // h₁ ≥ h₂ ≥ … ≥ h₂ₚ
  bool bound_ok = true;               // |hₖ + √w| ≤ C₀(τ⁻¹ w^{-1/2} + |z|)
  double bound_ratio = 0.0;           // max |hₖ + √w| / (τ⁻¹ w^{-1/2} + |z|)
};

inline constexpr double kCriticalValueC0 = 16.0;

// Throws NumericalError when the occupancy pattern is violated.
CriticalPointSet critical_points(double w, const SigmaSpectrum& spec, double z_mod, double tau = 0.05);

// Support membership from the critical values: w is in the support
// iff 0 is not attained by f on an increasing branch.
bool in_support_by_critical_values(const CriticalPointSet& set);

struct SupportOptions {
  int scan_points = 2000;
  double scan_min = 1e-6;
  double scan_max = 0.0;  // 0 selects 4(s₁ + |z|² + 1)
  double density_floor = 1e-5;
  double bisect_width = 1e-10;
  double edge_epsilon = 1e-3;
  double tau = 0.05;
  double z_band_min = 0.05;
  bool diagnostic = false;  // bypass the excluded band; cross-check indicators
  int threads = 1;
  DensityOptions density;
};

double default_scan_max(const SigmaSpectrum& spec, double z_mod);

bool support_indicator(double E, const SigmaSpectrum& spec, double z_mod, const SupportOptions& opts = {});

enum class EdgeSide { lower, upper };

struct EdgeInfo {
  double e = 0.0;
  double m = 0.0;           // m_c(e), real
  double f_residual = 0.0;  // |f(√e, m)|
  double dm_residual = 0.0; // |∂_m f(√e, m)|
  double d2f = 0.0;         // ∂²_m f(√e, m)
  double pole_distance = 0.0;
  bool regular = false;
  EdgeSide side = EdgeSide::lower;
};

struct ZeroEdge {
  double t = 0.0;
  double amplitude1 = 0.0;  // ρ₁ ≈ amplitude1 · x^{-1/2}
  double amplitude2 = 0.0;  // ρ₂ ≈ amplitude2 · x^{-1/2}
};

struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

struct SupportProfile {
  double z_mod = 0.0;
  std::vector<Band> bands;      // descending
  std::vector<EdgeInfo> edges;  // nonzero edges, descending
  std::optional<ZeroEdge> zero_edge;
  int scan_points = 0;
  double scan_min = 0.0;
  double scan_max = 0.0;
  double grid_ratio = 0.0;  // ratio of consecutive scan points
  double edge_epsilon = 0.0;
  int attempts = 1;
};

SupportProfile find_edges(const SigmaSpectrum& spec, double z_mod, const SupportOptions& opts = {});

// Real poles of f at real w > 0, ascending.
std::vector<double> real_poles(double w, const SigmaSpectrum& spec, double z_mod);

struct RegularityReport {
  double epsilon = 0.0;
  double pole_distance = 0.0;
  double d2f = 0.0;
  double neighbor_gap = 0.0;  // infinity when there is no other edge
  bool pole_ok = false;
  bool d2f_ok = false;
  bool gap_ok = false;
  bool regular = false;
};

RegularityReport check_edge_regularity(const EdgeInfo& edge, double epsilon, const std::vector<double>& other_edges = {});
RegularityReport check_edge_regularity(const SupportProfile& profile, std::size_t edge_index, double epsilon);

bool check_bulk_regularity(const Band& band, const SigmaSpectrum& spec, double z_mod, double tau_prime, double c,
                           const DensityOptions& opts = {});

// Least-squares slope of log ρ₁ against log |x − e| over |x − e| ∈ [1e−4, 1e−2].
double edge_exponent_fit(const EdgeInfo& edge, const SigmaSpectrum& spec, double z_mod,
                         const DensityOptions& opts = {});
double zero_edge_exponent_fit(const SigmaSpectrum& spec, double z_mod, const DensityOptions& opts = {});

// Root t > 0 of (1/K) Σ lᵢ (t + |z|² − sᵢ)/((sᵢ + |z|²)t + |z|⁴) = 0.
double small_w_t(const SigmaSpectrum& spec, double z_mod, double tau = 0.05);

std::string to_string(EdgeSide side);

}  // namespace txlaw
