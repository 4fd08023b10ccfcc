#include "txlaw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "txlaw/error.hpp"

namespace txlaw::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Householder vector for x: (I - beta v vᵀ) x = alpha e₁.
struct House {
  double alpha = 0.0;
  double beta = 0.0;
};

House make_house(std::span<double> v) {
  double norm = 0.0;
  for (double x : v) norm = std::hypot(norm, x);
  House h;
  if (norm == 0.0) return h;
  h.alpha = -std::copysign(norm, v[0]);
  v[0] -= h.alpha;
  double vv = 0.0;
  for (double x : v) vv += x * x;
  h.beta = vv > 0.0 ? 2.0 / vv : 0.0;
  return h;
}

template <class T>
Matrix<T> multiply_impl(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw InputError("multiply: dimension mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

void check_finite(const RealMatrix& a, const char* who) {
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
    if (!std::isfinite(a.data()[i])) throw InputError(std::string(who) + ": non-finite entry");
}

}  // namespace

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) { return multiply_impl(a, b); }
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply_impl(a, b); }

RealMatrix subtract(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("subtract: dimension mismatch");
  RealMatrix c = a;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

double frobenius_norm(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) s += a.data()[i] * a.data()[i];
  return std::sqrt(s);
}

double spectral_norm(const RealMatrix& a, int iterations) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m == 0 || n == 0) return 0.0;
  std::vector<double> x(n), y(m);
  for (std::size_t j = 0; j < n; ++j) x[j] = 1.0 + 0.1 * std::sin(1.0 + 3.7 * double(j));
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double nx = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    if (nx == 0.0) return 0.0;
    for (double& v : x) v /= nx;
    for (std::size_t i = 0; i < m; ++i) {
      auto ai = a.row(i);
      y[i] = std::inner_product(ai.begin(), ai.end(), x.begin(), 0.0);
    }
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      auto ai = a.row(i);
      for (std::size_t j = 0; j < n; ++j) x[j] += ai[j] * y[i];
    }
    double next = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    if (std::abs(next - lambda) <= 1e-13 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

double orthonormality_defect(const RealMatrix& q) {
  const std::size_t m = q.rows(), n = q.cols();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += q(i, a) * q(i, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

void sort_complex(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
}

// ---------------------------------------------------------------------------
// Symmetric eigenproblem

namespace {

// Reduces a to tridiagonal form. d is the diagonal, e[i] couples i and i+1.
// When qt is given it receives Qᵀ with A = Q T Qᵀ.
void tridiagonalize(RealMatrix& a, std::vector<double>& d, std::vector<double>& e, RealMatrix* qt) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<std::vector<double>> vs;
  std::vector<double> betas;
  std::vector<double> p(n), w(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    std::vector<double> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = a(k + 1 + i, k);
    House h = make_house(v);
    e[k] = h.beta == 0.0 ? a(k + 1, k) : h.alpha;
    if (h.beta != 0.0) {
      // p = beta B v, B the trailing block
      for (std::size_t i = 0; i < len; ++i) {
        const double* bi = &a(k + 1 + i, k + 1);
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) s += bi[j] * v[j];
        p[i] = h.beta * s;
      }
      double pv = 0.0;
      for (std::size_t i = 0; i < len; ++i) pv += p[i] * v[i];
      const double kk = 0.5 * h.beta * pv;
      for (std::size_t i = 0; i < len; ++i) w[i] = p[i] - kk * v[i];
      for (std::size_t i = 0; i < len; ++i) {
        double* bi = &a(k + 1 + i, k + 1);
        const double vi = v[i], wi = w[i];
        for (std::size_t j = 0; j < len; ++j) bi[j] -= vi * w[j] + wi * v[j];
      }
    }
    if (qt) {
      vs.push_back(std::move(v));
      betas.push_back(h.beta);
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  if (n >= 2) e[n - 2] = a(n - 1, n - 2);

  if (qt) {
    *qt = RealMatrix::identity(n);
    std::vector<double> t(n);
    for (std::size_t k = 0; k < vs.size(); ++k) {
      if (betas[k] == 0.0) continue;
      const auto& v = vs[k];
      const std::size_t off = k + 1;
      std::fill(t.begin(), t.end(), 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) {
        auto row = qt->row(off + i);
        for (std::size_t j = 0; j < n; ++j) t[j] += v[i] * row[j];
      }
      for (std::size_t i = 0; i < v.size(); ++i) {
        auto row = qt->row(off + i);
        const double f = betas[k] * v[i];
        for (std::size_t j = 0; j < n; ++j) row[j] -= f * t[j];
      }
    }
  }
}

// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
// Rotations are applied to the rows of wt when given.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, RealMatrix* wt) {
  const int n = int(d.size());
  const int max_iter = 30;
  long total = 0;
  const long max_total = 30L * std::max(n, 1);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == max_iter || ++total > max_total)
          throw NumericalError("symmetric_eigen: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          d[i + 1] = g + (p = s * r);
          g = c * r - b;
          if (wt) {
            auto ri = wt->row(std::size_t(i));
            auto rj = wt->row(std::size_t(i + 1));
            for (std::size_t k = 0; k < ri.size(); ++k) {
              f = rj[k];
              rj[k] = s * ri[k] + c * f;
              ri[k] = c * ri[k] - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void check_symmetric(const RealMatrix& a) {
  if (!a.square()) throw InputError("symmetric_eigen: matrix not square");
  check_finite(a, "symmetric_eigen");
  double scale = 0.0;
  for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) scale = std::max(scale, std::abs(a.data()[i]));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
        throw InputError("symmetric_eigen: matrix not symmetric");
}

}  // namespace

SymmetricEigen symmetric_eigen(const RealMatrix& a, bool want_vectors) {
  check_symmetric(a);
  const std::size_t n = a.rows();
  SymmetricEigen out;
  if (n == 0) return out;
  RealMatrix work = a;
  std::vector<double> d, e;
  RealMatrix wt;
  tridiagonalize(work, d, e, want_vectors ? &wt : nullptr);
  tridiagonal_ql(d, e, want_vectors ? &wt : nullptr);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (want_vectors) {
    out.vectors = RealMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      auto src = wt.row(order[k]);
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = src[i];
    }
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(const RealMatrix& a) { return symmetric_eigen(a, false).values; }

// ---------------------------------------------------------------------------
// SVD

namespace {

// Rows of b are the columns being orthogonalized; rows of vt accumulate V.
void jacobi_sweeps(RealMatrix& b, RealMatrix& vt) {
  const std::size_t n = b.rows();
  const std::size_t m = b.cols();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto bp = b.row(p), bq = b.row(q);
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += bp[i] * bp[i];
          beta += bq[i] * bq[i];
          gamma += bp[i] * bq[i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = bp[i], y = bq[i];
          bp[i] = c * x - s * y;
          bq[i] = s * x + c * y;
        }
        auto vp = vt.row(p), vq = vt.row(q);
        for (std::size_t i = 0; i < vp.size(); ++i) {
          const double x = vp[i], y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) return;
  }
  throw NumericalError("svd: Jacobi sweeps did not converge");
}

// Replaces the flagged rows of u (length-m unit vectors) by an orthonormal completion.
void complete_basis(RealMatrix& u, const std::vector<bool>& missing) {
  const std::size_t k = u.rows(), m = u.cols();
  std::size_t candidate = 0;
  for (std::size_t r = 0; r < k; ++r) {
    if (!missing[r]) continue;
    while (candidate < m) {
      std::vector<double> x(m, 0.0);
      x[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t o = 0; o < k; ++o) {
          if (o == r || (missing[o] && o > r)) continue;
          auto uo = u.row(o);
          const double dot = std::inner_product(x.begin(), x.end(), uo.begin(), 0.0);
          for (std::size_t i = 0; i < m; ++i) x[i] -= dot * uo[i];
        }
      const double norm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
      if (norm > 1e-3) {
        auto ur = u.row(r);
        for (std::size_t i = 0; i < m; ++i) ur[i] = x[i] / norm;
        break;
      }
    }
  }
}

}  // namespace

SVD svd(const RealMatrix& a) {
  check_finite(a, "svd");
  if (a.rows() < a.cols()) {
    SVD t = svd(a.transpose());
    std::swap(t.u, t.v);
    return t;
  }
  const std::size_t m = a.rows(), n = a.cols();
  RealMatrix b = a.transpose();
  RealMatrix vt = RealMatrix::identity(n);
  jacobi_sweeps(b, vt);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto bj = b.row(j);
    sigma[j] = std::sqrt(std::inner_product(bj.begin(), bj.end(), bj.begin(), 0.0));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double smax = n ? sigma[order[0]] : 0.0;
  const double cutoff = std::max<double>(double(m), 1.0) * kEps * smax;
  RealMatrix ut(n, m);
  std::vector<bool> missing(n, false);
  SVD out;
  out.sigma.resize(n);
  out.v = RealMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sigma[j];
    auto src = b.row(j);
    auto dst = ut.row(k);
    if (sigma[j] > cutoff && sigma[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) dst[i] = src[i] / sigma[j];
    } else {
      missing[k] = true;
    }
    auto vj = vt.row(j);
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = vj[i];
  }
  complete_basis(ut, missing);
  out.u = ut.transpose();
  return out;
}

// ---------------------------------------------------------------------------
// Nonsymmetric eigenvalues

namespace {

void balance(RealMatrix& a) {
  const std::size_t n = a.rows();
  const double radix = 2.0, sqrdx = 4.0;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void hessenberg(RealMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> t(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    std::vector<double> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = a(k + 1 + i, k);
    House h = make_house(v);
    if (h.beta == 0.0) continue;
    // left application on rows k+1.., columns k..
    std::fill(t.begin(), t.end(), 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      const double* row = &a(k + 1 + i, 0);
      for (std::size_t j = k; j < n; ++j) t[j] += v[i] * row[j];
    }
    for (std::size_t i = 0; i < len; ++i) {
      double* row = &a(k + 1 + i, 0);
      const double f = h.beta * v[i];
      for (std::size_t j = k; j < n; ++j) row[j] -= f * t[j];
    }
    // right application on columns k+1..
    for (std::size_t r = 0; r < n; ++r) {
      double* row = &a(r, k + 1);
      double dot = 0.0;
      for (std::size_t i = 0; i < len; ++i) dot += row[i] * v[i];
      dot *= h.beta;
      for (std::size_t i = 0; i < len; ++i) row[i] -= dot * v[i];
    }
    a(k + 1, k) = h.alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
std::vector<cplx> hessenberg_qr(RealMatrix& a) {
  const int n = int(a.rows());
  std::vector<double> wr(n), wi(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

  int nn = n - 1;
  double t = 0.0;
  long total = 0;
  const long max_total = 40L * std::max(n, 1);
  while (nn >= 0) {
    int its = 0, l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= kEps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn--] = 0.0;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + std::copysign(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -(wi[nn] = z);
          }
          nn -= 2;
        } else {
          if (its == 60 || ++total > max_total)
            throw NumericalError("general_eigenvalues: QR iteration did not converge");
          if (its == 10 || its == 20 || its == 40) {
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0, z;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= kEps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
            if (s != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              double* rk = &a(k, 0);
              double* rk1 = &a(k + 1, 0);
              double* rk2 = k != nn - 1 ? &a(k + 2, 0) : nullptr;
              for (int j = k; j <= nn; ++j) {
                p = rk[j] + q * rk1[j];
                if (rk2) {
                  p += r * rk2[j];
                  rk2[j] -= p * z;
                }
                rk1[j] -= p * y;
                rk[j] -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                double* ri = &a(i, 0);
                p = x * ri[k] + y * ri[k + 1];
                if (rk2) {
                  p += z * ri[k + 2];
                  ri[k + 2] -= p * r;
                }
                ri[k + 1] -= p * q;
                ri[k] -= p;
              }
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  return out;
}

}  // namespace

std::vector<cplx> general_eigenvalues(const RealMatrix& a) {
  if (!a.square()) throw InputError("general_eigenvalues: matrix not square");
  check_finite(a, "general_eigenvalues");
  if (a.rows() == 0) return {};
  RealMatrix h = a;
  balance(h);
  hessenberg(h);
  auto ev = hessenberg_qr(h);
  sort_complex(ev);
  return ev;
}

// ---------------------------------------------------------------------------
// Polynomial roots

namespace {

double cabs1(cplx x) { return std::abs(x.real()) + std::abs(x.imag()); }

void balance(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  const double radix = 2.0, sqrdx = 4.0;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) {
          c += cabs1(a(j, i));
          r += cabs1(a(i, j));
        }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Shifted QR with Givens rotations on a complex upper Hessenberg matrix.
std::vector<cplx> complex_hessenberg_qr(ComplexMatrix& h) {
  const int n = int(h.rows());
  std::vector<cplx> ev(n);
  std::vector<cplx> cs(n), sn(n);
  int nn = n - 1;
  int its = 0;
  double hnorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hnorm = std::max(hnorm, cabs1(h(i, j)));
  if (hnorm == 0.0) hnorm = 1.0;

  while (nn >= 0) {
    if (nn == 0) {
      ev[0] = h(0, 0);
      break;
    }
    int l = 0;
    for (int k = nn; k >= 1; --k) {
      double s = cabs1(h(k - 1, k - 1)) + cabs1(h(k, k));
      if (s == 0.0) s = hnorm;
      if (cabs1(h(k, k - 1)) <= kEps * s) {
        h(k, k - 1) = 0.0;
        l = k;
        break;
      }
    }
    if (l == nn) {
      ev[nn] = h(nn, nn);
      --nn;
      its = 0;
      continue;
    }
    if (its >= 60) throw NumericalError("companion_roots: QR iteration did not converge");

    cplx mu;
    if (its == 10 || its == 20 || its == 40) {
      mu = h(nn, nn) + cplx(std::abs(h(nn, nn - 1).real()) + (nn >= 2 ? std::abs(h(nn - 1, nn - 2).real()) : 0.0),
                            0.0);
    } else {
      const cplx a = h(nn - 1, nn - 1), b = h(nn - 1, nn), c = h(nn, nn - 1), d = h(nn, nn);
      const cplx half_tr = 0.5 * (a + d);
      const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
      const cplx mu1 = half_tr + disc, mu2 = half_tr - disc;
      mu = std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
    }
    ++its;

    for (int k = l; k <= nn; ++k) h(k, k) -= mu;
    for (int k = l; k < nn; ++k) {
      const cplx x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      cplx c = 1.0, s = 0.0;
      if (r != 0.0) {
        c = x / r;
        s = y / r;
      }
      cs[k] = c;
      sn[k] = s;
      for (int j = k; j <= nn; ++j) {
        const cplx u = h(k, j), v = h(k + 1, j);
        h(k, j) = std::conj(c) * u + std::conj(s) * v;
        h(k + 1, j) = -s * u + c * v;
      }
    }
    for (int k = l; k < nn; ++k) {
      const cplx c = cs[k], s = sn[k];
      const int top = std::min(k + 2, nn);
      for (int i = l; i <= top; ++i) {
        const cplx u = h(i, k), v = h(i, k + 1);
        h(i, k) = c * u + s * v;
        h(i, k + 1) = -std::conj(s) * u + std::conj(c) * v;
      }
    }
    for (int k = l; k <= nn; ++k) h(k, k) += mu;
  }
  return ev;
}

// p and p' by Horner, coefficients ascending.
std::pair<cplx, cplx> horner(std::span<const cplx> c, cplx x) {
  cplx p = 0.0, dp = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    dp = dp * x + p;
    p = p * x + c[k];
  }
  return {p, dp};
}

}  // namespace

std::vector<cplx> companion_roots(std::span<const cplx> coeffs) {
  if (coeffs.empty()) throw InputError("companion_roots: empty coefficient list");
  for (const cplx& c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InputError("companion_roots: non-finite coefficient");
  const std::size_t degree = coeffs.size() - 1;
  if (std::abs(coeffs[degree]) < 1e-300) throw InputError("companion_roots: degenerate leading coefficient");

  std::size_t zeros = 0;
  while (zeros < degree && coeffs[zeros] == cplx(0.0)) ++zeros;
  std::span<const cplx> c = coeffs.subspan(zeros);
  const std::size_t d = c.size() - 1;

  std::vector<cplx> roots(zeros, cplx(0.0));
  if (d == 1) {
    roots.push_back(-c[0] / c[1]);
  } else if (d >= 2) {
    ComplexMatrix h(d, d);
    for (std::size_t j = 0; j < d; ++j) h(0, j) = -c[d - 1 - j] / c[d];
    for (std::size_t i = 1; i < d; ++i) h(i, i - 1) = 1.0;
    balance(h);
    auto ev = complex_hessenberg_qr(h);
    for (cplx x : ev) {
      auto [p, dp] = horner(c, x);
      if (dp != cplx(0.0)) {
        const cplx y = x - p / dp;
        if (std::abs(horner(c, y).first) < std::abs(p)) x = y;
      }
      roots.push_back(x);
    }
  }
  sort_complex(roots);
  return roots;
}

std::vector<cplx> companion_roots(std::span<const double> coeffs) {
  std::vector<cplx> c(coeffs.begin(), coeffs.end());
  return companion_roots(std::span<const cplx>(c));
}

// ---------------------------------------------------------------------------
// QR and Haar sampling

QR householder_qr(const RealMatrix& a) {
  check_finite(a, "householder_qr");
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw InputError("householder_qr: matrix must be tall or square");
  RealMatrix r = a;
  std::vector<std::vector<double>> vs(n);
  std::vector<double> betas(n, 0.0), t(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = r(i, k);
    if (v.size() == 1) {
      vs[k] = std::move(v);
      continue;
    }
    House h = make_house(v);
    if (h.beta != 0.0) {
      std::fill(t.begin(), t.end(), 0.0);
      for (std::size_t i = k; i < m; ++i) {
        auto row = r.row(i);
        for (std::size_t j = k; j < n; ++j) t[j] += v[i - k] * row[j];
      }
      for (std::size_t i = k; i < m; ++i) {
        auto row = r.row(i);
        const double f = h.beta * v[i - k];
        for (std::size_t j = k; j < n; ++j) row[j] -= f * t[j];
      }
      r(k, k) = h.alpha;
      for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
    }
    betas[k] = h.beta;
    vs[k] = std::move(v);
  }
  QR out;
  out.q = RealMatrix(m, n);
  for (std::size_t j = 0; j < n; ++j) out.q(j, j) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    if (betas[k] == 0.0) continue;
    const auto& v = vs[k];
    std::fill(t.begin(), t.end(), 0.0);
    for (std::size_t i = k; i < m; ++i) {
      auto row = out.q.row(i);
      for (std::size_t j = 0; j < n; ++j) t[j] += v[i - k] * row[j];
    }
    for (std::size_t i = k; i < m; ++i) {
      auto row = out.q.row(i);
      const double f = betas[k] * v[i - k];
      for (std::size_t j = 0; j < n; ++j) row[j] -= f * t[j];
    }
  }
  out.r = RealMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.r(i, j) = r(i, j);
  return out;
}

RealMatrix qr_haar(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw InputError("qr_haar: n must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealMatrix g(n, n);
  for (std::size_t i = 0; i < n * n; ++i) g.data()[i] = gauss(rng);
  QR f = householder_qr(g);
  for (std::size_t j = 0; j < n; ++j) {
    if (f.r(j, j) < 0.0)
      for (std::size_t i = 0; i < n; ++i) f.q(i, j) = -f.q(i, j);
  }
  return f.q;
}

}  // namespace txlaw::linalg
