#pragma once

#include <complex>
#include <vector>

namespace txlaw {

using cplx = std::complex<double>;

// Coefficients in ascending order: c[0] + c[1] m + c[2] m² + ...
using Poly = std::vector<cplx>;

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, cplx k);
Poly poly_derivative(const Poly& a);
cplx poly_eval(const Poly& a, cplx x);
double poly_scale_norm(const Poly& a);  // max |coefficient|

}  // namespace txlaw
