#include "txlaw/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "txlaw/error.hpp"

namespace txlaw {

SigmaSpectrum group_spectrum(const std::vector<double>& values, const std::vector<long>& multiplicities, long N,
                             long M, double merge_tol) {
  if (values.empty()) throw InputError("spectrum: empty input");
  if (values.size() != multiplicities.size()) throw InputError("spectrum: s and l lengths differ");
  if (N <= 0 || M <= 0) throw InputError("spectrum: N and M must be positive");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) throw InputError("spectrum: non-positive entry");
    if (multiplicities[i] <= 0) throw InputError("spectrum: multiplicities must be positive");
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  SigmaSpectrum out;
  out.N = N;
  out.M = M;
  // Merge against the first member of each group so chains cannot drift.
  double anchor = 0.0;
  double weighted = 0.0;
  for (std::size_t idx : order) {
    const double v = values[idx];
    const long m = multiplicities[idx];
    if (!out.s.empty() && std::abs(anchor - v) <= merge_tol * anchor) {
      weighted += v * double(m);
      out.l.back() += m;
      out.s.back() = weighted / double(out.l.back());
    } else {
      anchor = v;
      weighted = v * double(m);
      out.s.push_back(v);
      out.l.push_back(m);
    }
  }
  return out;
}

double mean_eigenvalue(const SigmaSpectrum& spec) {
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.n(); ++i) acc += double(spec.l[i]) * spec.s[i];
  return acc / double(spec.K());
}

void validate(const SigmaSpectrum& spec, double tau) {
  std::ostringstream why;
  if (spec.s.empty()) throw InputError("spectrum: empty");
  if (spec.s.size() != spec.l.size()) throw InputError("spectrum: s and l lengths differ");
  for (std::size_t i = 0; i + 1 < spec.n(); ++i)
    if (!(spec.s[i] > spec.s[i + 1])) throw InputError("spectrum: s must be strictly descending");
  const long total = std::accumulate(spec.l.begin(), spec.l.end(), 0L);
  if (total != spec.K()) {
    why << "spectrum: multiplicities sum to " << total << ", expected K = " << spec.K();
    throw InputError(why.str());
  }
  const double mean = mean_eigenvalue(spec);
  if (std::abs(mean - 1.0) > 1e-12) {
    why << "spectrum: normalization violated, (1/K) sum l s = " << mean;
    throw InputError(why.str());
  }
  if (spec.s.back() < tau || spec.s.front() > 1.0 / tau) {
    why << "spectrum: eigenvalues outside [tau, 1/tau] for tau = " << tau;
    throw InputError(why.str());
  }
  const double ratio = double(spec.M) / double(spec.N);
  if (ratio < tau || ratio > 1.0 / tau) {
    why << "spectrum: aspect ratio M/N = " << ratio << " outside [tau, 1/tau]";
    throw InputError(why.str());
  }
}

Normalized normalize(const SigmaSpectrum& spec) {
  for (double v : spec.s)
    if (!(v > 0.0)) throw InputError("normalize: non-positive eigenvalue");
  const double mean = mean_eigenvalue(spec);
  Normalized out;
  out.ratio = 1.0 / mean;
  std::vector<double> scaled(spec.s);
  for (double& v : scaled) v *= out.ratio;
  out.spec = group_spectrum(scaled, spec.l, spec.N, spec.M);
  // One correction pass removes the last ulp of drift.
  const double again = mean_eigenvalue(out.spec);
  if (again != 1.0) {
    for (double& v : out.spec.s) v /= again;
    out.ratio /= again;
  }
  return out;
}

SigmaSpectrum make_spectrum(const std::vector<double>& s, const std::vector<long>& l, long N, long M,
                            const SigmaOptions& opts) {
  SigmaSpectrum spec = group_spectrum(s, l, N, M, opts.merge_tol);
  if (opts.auto_normalize) spec = normalize(spec).spec;
  validate(spec, opts.tau);
  return spec;
}

SigmaSpectrum sigma_from_singular_values(const std::vector<double>& d, long N, long M, const SigmaOptions& opts) {
  if (d.empty()) throw InputError("singular values: empty input");
  const long K = std::min(N, M);
  if (long(d.size()) != K) {
    std::ostringstream why;
    why << "singular values: expected K = " << K << " entries, got " << d.size();
    throw InputError(why.str());
  }
  std::vector<double> s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw InputError("singular values: non-positive entry");
    s[i] = d[i] * d[i];
  }
  return make_spectrum(s, std::vector<long>(d.size(), 1), N, M, opts);
}

double harmonic_mean_t0(const SigmaSpectrum& spec) {
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.n(); ++i) acc += spec.weight(i) / spec.s[i];
  return 1.0 / acc;
}

std::vector<double> expand(const SigmaSpectrum& spec) {
  std::vector<double> out;
  out.reserve(std::size_t(spec.K()));
  for (std::size_t i = 0; i < spec.n(); ++i) out.insert(out.end(), std::size_t(spec.l[i]), spec.s[i]);
  return out;
}

SigmaSpectrum fig2_spectrum(long N, long M) {
  const long K = std::min(N, M);
  if (K % 2 != 0) throw InputError("fig2 spectrum needs even K");
  return make_spectrum({32.0 / 17.0, 2.0 / 17.0}, {K / 2, K / 2}, N, M);
}

SigmaSpectrum identity_spectrum(long N, long M) { return make_spectrum({1.0}, {std::min(N, M)}, N, M); }

void check_z_band(double z_mod, double z_band_min) {
  if (!(z_mod >= 0.0) || !std::isfinite(z_mod)) throw InputError("|z| must be a nonnegative number");
  if (std::abs(z_mod * z_mod - 1.0) < z_band_min) {
    std::ostringstream why;
    why << "|z| = " << z_mod << " lies in the excluded band ||z|^2 - 1| < " << z_band_min;
    throw DomainError(why.str());
  }
}

}  // namespace txlaw
