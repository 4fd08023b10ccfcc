#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "txlaw/density.hpp"
#include "txlaw/linalg.hpp"
#include "txlaw/sigma.hpp"

namespace txlaw {

enum class TMode { diagonal, haar };
enum class XDist { gauss, rademacher, skewed };

std::string to_string(TMode m);
std::string to_string(XDist d);
TMode parse_tmode(const std::string& s);
XDist parse_xdist(const std::string& s);

struct EnsembleConfig {
  SigmaSpectrum spec;  // carries N and M
  TMode t_mode = TMode::diagonal;
  XDist x_dist = XDist::gauss;
  std::vector<std::complex<double>> z_list;
  int runs = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  bool want_eigenvalues = true;  // eigenvalues of TX are the costly part
  long N() const { return spec.N; }
  long M() const { return spec.M; }
  long K() const { return spec.K(); }
};

struct RunResult {
  int run_index = 0;
  std::uint64_t seed_used = 0;
  bool ok = true;
  std::string failure;
  std::vector<std::complex<double>> eigenvalues;  // of TX, length N
  std::vector<std::vector<double>> singular;      // per z: λ₁ ≤ … ≤ λ_N of YY†
  double seconds = 0.0;
};

struct EnsembleResult {
  std::vector<RunResult> runs;  // ordered by run index
  int failures = 0;
  double success_fraction() const;
};

std::uint64_t run_seed(std::uint64_t seed, int run_index);

// T (N×M) and X (M×N) for one run, drawn from the run's own stream.
struct Sample {
  linalg::RealMatrix T;
  linalg::RealMatrix X;
};

Sample sample_matrices(const EnsembleConfig& cfg, int run_index);

// Eigenvalues of YY† for Y = TX − z, ascending and clipped at 0.
std::vector<double> singular_spectrum(const linalg::RealMatrix& tx, std::complex<double> z);

RunResult sample_run(const EnsembleConfig& cfg, int run_index);
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

struct MomentCheck {
  double mean = 0.0, variance = 0.0, third = 0.0;
  double expected_third = 0.0;
  double z_mean = 0.0, z_variance = 0.0, z_third = 0.0;  // deviations in standard errors
  bool ok = false;  // all within 5σ
};

MomentCheck moment_self_test(const EnsembleConfig& cfg, int run_index);

struct AveragedLawPoint {
  double eta = 0.0;
  std::complex<double> m2c;
  double median = 0.0;  // of Nη|m₂ − m₂c| over runs
  double p90 = 0.0;
  int runs = 0;
};

struct AveragedLawProfile {
  double E = 0.0;
  bool in_support = true;
  std::vector<AveragedLawPoint> points;
};

// m₂(w) = (1/N) Σ 1/(λⱼ − w) from the singular spectra at index z_index.
std::complex<double> empirical_m2(const std::vector<double>& lambda, std::complex<double> w);

AveragedLawProfile averaged_law_profile(const EnsembleResult& ens, const SigmaSpectrum& spec, double z_mod, double E,
                                        const std::vector<double>& eta_grid, std::size_t z_index = 0);
AveragedLawProfile averaged_law_profile(EnsembleConfig cfg, double z_mod, double E,
                                        const std::vector<double>& eta_grid);

struct EntrywiseResult {
  std::complex<double> w;
  double psi = 0.0;
  std::vector<double> ratios;        // per run: max group ‖(G − Π)_[ij]‖ / Ψ
  std::vector<double> probe_ratios;  // per run: max |⟨v, (G − Π) v⟩| / Ψ over random unit v
  std::vector<double> m1_error;      // per run: |m₁ − m₁c|
  double pi_bound = 0.0;             // max ‖π_[i]c‖ · |w|^{1/2}
};

// Resolvent G of the linearized 2N×2N matrix from the singular decomposition of Y.
linalg::ComplexMatrix resolvent_from_svd(const linalg::RealMatrix& y, std::complex<double> w);

// 2×2 blocks π_[i]c of Π for diagonal T.
std::vector<std::array<std::complex<double>, 4>> pi_blocks(const SigmaSpectrum& spec, double z_mod,
                                                           std::complex<double> w, std::complex<double> m1c,
                                                           std::complex<double> m2c);

EntrywiseResult entrywise_law_check(const EnsembleConfig& cfg, double z_mod, std::complex<double> w,
                                    double psi_scale = 1.0, double zeta = 0.1, int probes = 4);

struct RigidityProfile {
  std::vector<long> indices;  // 1-based bulk indices
  std::vector<double> median;  // per index, over runs
  std::vector<double> max;
  double median_bulk = 0.0;  // over all runs and bulk indices
  double median_edge = 0.0;  // top 1% of indices
  int runs = 0;
};

RigidityProfile rigidity_profile(const EnsembleResult& ens, const DensityTable& table, std::size_t z_index = 0);
RigidityProfile rigidity_profile(EnsembleConfig cfg, double z_mod, const TableOptions& opts = {});

struct ExtremeStats {
  std::vector<double> lambda_min, lambda_max;
  double median_min = 0.0, median_max = 0.0;
  int small_violations = 0;  // λ₁ < exp(−N^0.3)
  int large_violations = 0;  // λ_N > (‖T‖(C₀ + 1) + |z|)²
  int norm_violations = 0;   // λ_N > (‖T‖‖X‖ + |z|)²
  int runs = 0;
};

ExtremeStats extreme_singular_stats(const EnsembleConfig& cfg, double z_mod, double c0 = 3.0);

// F(z) = (1 − |z|²)³ on the unit disk.
double bump(std::complex<double> z);
double bump_laplacian_l1();  // ‖ΔF‖_{L¹} = 32π/9

// (1/π) ∫ F_{z₀,a} χ̃ dA with χ̃ interpolated from the radial profile.
double local_circular_target(std::complex<double> z0, double a, long K, const RadialProfile& profile);
double local_circular_statistic(const std::vector<std::complex<double>>& mu, std::complex<double> z0, double a, long K);
double local_circular_bound(double a, long K);  // K^{−1/2+2a} ‖ΔF‖₁

std::vector<double> local_circular_test(const EnsembleResult& ens, long K, std::complex<double> z0, double a,
                                        const RadialProfile& profile);

// F(r) from the radial profile, extended by χ̃(r_min) r² below r_min.
double radial_cdf(const RadialProfile& profile, double r);

// sup |F̂ − F| over profile grid points outside the hole, nontrivial eigenvalues only.
double radial_esd_deviation(const std::vector<std::complex<double>>& mu, long K, const RadialProfile& profile);

// sup |F̂ − ∫ρ₂c| for one singular spectrum.
double singular_cdf_deviation(const std::vector<double>& lambda, const DensityTable& table);

struct KSResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

}  // namespace txlaw
