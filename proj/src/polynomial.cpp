#include "txlaw/polynomial.hpp"

#include <algorithm>

namespace txlaw {

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, cplx(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()), cplx(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

Poly poly_scale(const Poly& a, cplx k) {
  Poly c(a);
  for (cplx& x : c) x *= k;
  return c;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {cplx(0.0)};
  Poly d(a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k) d[k - 1] = double(k) * a[k];
  return d;
}

cplx poly_eval(const Poly& a, cplx x) {
  cplx p = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) p = p * x + a[k];
  return p;
}

double poly_scale_norm(const Poly& a) {
  double s = 0.0;
  for (const cplx& x : a) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace txlaw
