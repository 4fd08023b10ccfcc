#pragma once

#include <cstddef>
#include <vector>

namespace txlaw {

// Distinct nonzero eigenvalues s (strictly descending) of Σ = TT† with
// integer multiplicities l, plus the dimensions of T.
struct SigmaSpectrum {
  std::vector<double> s;
  std::vector<long> l;
  long N = 0;
  long M = 0;

  long K() const { return N < M ? N : M; }
  std::size_t n() const { return s.size(); }
  double weight(std::size_t i) const { return double(l[i]) / double(K()); }
};

struct SigmaOptions {
  double tau = 0.05;
  bool auto_normalize = false;
  double merge_tol = 1e-10;  // relative
};

struct ModelParams {
  double tau = 0.05;
  double z_mod = 0.0;
  double z_band_min = 0.05;
};

// Sorts descending and merges values within relative merge_tol.
// Checks positivity only.
SigmaSpectrum group_spectrum(const std::vector<double>& values, const std::vector<long>& multiplicities, long N,
                             long M, double merge_tol = 1e-10);

// Throws InputError unless every SigmaSpectrum invariant holds for tau.
void validate(const SigmaSpectrum& spec, double tau);

double mean_eigenvalue(const SigmaSpectrum& spec);

struct Normalized {
  SigmaSpectrum spec;
  double ratio = 1.0;  // factor applied to every s
};

Normalized normalize(const SigmaSpectrum& spec);

SigmaSpectrum sigma_from_singular_values(const std::vector<double>& d, long N, long M,
                                         const SigmaOptions& opts = {});

// Builds and validates a spectrum from (s, l) pairs.
SigmaSpectrum make_spectrum(const std::vector<double>& s, const std::vector<long>& l, long N, long M,
                            const SigmaOptions& opts = {});

// t₀ = (K⁻¹ Σ lᵢ/sᵢ)⁻¹
double harmonic_mean_t0(const SigmaSpectrum& spec);

// Eigenvalues with multiplicity, descending.
std::vector<double> expand(const SigmaSpectrum& spec);

// Equal-weight spectrum with eigenvalues 32/17 and 2/17.
SigmaSpectrum fig2_spectrum(long N = 1000, long M = 1000);
SigmaSpectrum identity_spectrum(long N, long M);

// Checks ||z|²−1| against the excluded band; throws DomainError.
void check_z_band(double z_mod, double z_band_min);

}  // namespace txlaw
