#pragma once
#include <complex>

namespace cesaro {

using cplx = std::complex<double>;

// Principal branch of log Gamma (analytic continuation off (-inf, 0], real on
// the positive axis), >= 12 significant digits for |z| <= 1e6.
// Throws std::domain_error at the poles z = 0, -1, -2, ...
cplx log_gamma(cplx z);

bool gamma_pole(cplx z);

// exp(log_gamma(num) - log_gamma(den)), never forming Gamma values directly:
// |Gamma(x+iy)| decays like e^{-pi|y|/2} and underflows long before the ratio
// does.  A denominator pole yields 0; a numerator pole throws.
cplx gamma_ratio(cplx num, cplx den);

// omega2(z) = sum_{m>=1} e^{-m^2 z}, re(z) > 0; theta(z) = 1 + 2 omega2(z).
// Truncation keeps the dropped tail below 1e-18 relative to the leading term.
cplx omega2(cplx z);
cplx theta(cplx z);

// |theta(z) - (pi/z)^{1/2} theta(pi^2/z)| with the principal square root.
double theta_functional_eq_residual(cplx z);

// Truncated oscillatory quadrature of (1/2pi) int_{-U}^{U} e^{iDu} (a+iu)^{-s} du
// against the closed-form kernel: D^{s-1} e^{-aD} / Gamma(s) for D > 0,
// 0 for D < 0 (needs re s > 1), 1/2 for s = 1 and D = 0, 0 for D = 0, re s > 1.
struct LaplaceCheck {
    cplx value;             // quadrature result
    double residual;        // |value - closed form|
    double tail_estimate;   // bound on the neglected |u| > U contribution
};
LaplaceCheck laplace_kernel_check(cplx s, double a, double D, double half_width);

}  // namespace cesaro
