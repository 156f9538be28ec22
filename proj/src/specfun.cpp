#include "cesaro/specfun.hpp"
#include "cesaro/kahan.hpp"
#include "cesaro/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cesaro {

// ------------------------------------------------------------ Gauss rule ----

const GLRule& gl_rule(int n) {
    static std::mutex mu;
    static std::map<int, GLRule> cache;  // node insertion never moves entries
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        // The Chebyshev guess enumerates roots right to left; store ascending.
        r.x[n - 1 - i] = x;
        r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

// ------------------------------------------------------------- log gamma ----

bool gamma_pole(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx log_gamma(cplx z) {
    if (gamma_pole(z)) throw std::domain_error("log_gamma: pole at nonpositive integer");

    // shift right until the Stirling series converges at full precision
    cplx corr = 0.0;
    while (z.real() < 0.5 || std::abs(z) < 37.0) {
        corr += std::log(z);
        z += 1.0;
    }

    // Stirling with Bernoulli terms through 1/z^13; |error| < 1e-20 for |z| >= 37
    const cplx zi = 1.0 / z, z2 = zi * zi;
    cplx series = zi * (1.0 / 12.0);
    cplx p = zi * z2;
    series -= p * (1.0 / 360.0);
    p *= z2;
    series += p * (1.0 / 1260.0);
    p *= z2;
    series -= p * (1.0 / 1680.0);
    p *= z2;
    series += p * (1.0 / 1188.0);
    p *= z2;
    series -= p * (691.0 / 360360.0);
    p *= z2;
    series += p * (1.0 / 156.0);

    const double half_log_2pi = 0.91893853320467274178;
    return (z - 0.5) * std::log(z) - z + half_log_2pi + series - corr;
}

cplx gamma_ratio(cplx num, cplx den) {
    const bool np = gamma_pole(num), dp = gamma_pole(den);
    if (np) throw std::domain_error("gamma_ratio: pole in numerator");
    if (dp) return 0.0;  // Gamma(den) blows up, the ratio vanishes
    return std::exp(log_gamma(num) - log_gamma(den));
}

// ------------------------------------------------------------ theta series ----

cplx omega2(cplx z) {
    if (!(z.real() > 0.0)) throw std::invalid_argument("omega2: requires re(z) > 0");
    const double a = z.real();
    // e^{-a((M+1)^2 - 1)} < 1e-18 relative to the m = 1 term
    const auto M = static_cast<long>(std::ceil(std::sqrt(42.0 / a + 1.0))) + 1;
    Kahan re, im;
    for (long m = 1; m <= M; ++m) {
        const cplx t = std::exp(-static_cast<double>(m) * static_cast<double>(m) * z);
        re.add(t.real());
        im.add(t.imag());
    }
    return {re.value(), im.value()};
}

cplx theta(cplx z) { return 1.0 + 2.0 * omega2(z); }

double theta_functional_eq_residual(cplx z) {
    const cplx lhs = theta(z);
    const cplx rhs = std::sqrt(std::numbers::pi / z) *
                     theta(std::numbers::pi * std::numbers::pi / z);
    return std::abs(lhs - rhs);
}

// --------------------------------------------------------- Laplace kernel ----

namespace {

// e^{iDu}(a+iu)^{-s} + e^{-iDu}(a-iu)^{-s}: fold the symmetric contour onto u >= 0
cplx folded_integrand(cplx s, double a, double D, double u) {
    const cplx up = std::exp(cplx(0.0, D * u) - s * std::log(cplx(a, u)));
    if (u == 0.0) return up;
    const cplx un = std::exp(cplx(0.0, -D * u) - s * std::log(cplx(a, -u)));
    return up + un;
}

}  // namespace

LaplaceCheck laplace_kernel_check(cplx s, double a, double D, double half_width) {
    if (!(s.real() > 0.0)) throw std::invalid_argument("laplace_kernel_check: requires re(s) > 0");
    if (!(a > 0.0)) throw std::invalid_argument("laplace_kernel_check: requires a > 0");
    if (!(half_width > 0.0)) throw std::invalid_argument("laplace_kernel_check: requires U > 0");
    if (D < 0.0 && !(s.real() > 1.0))
        throw std::invalid_argument(
            "laplace_kernel_check: D < 0 needs re(s) > 1 for the truncated tail to converge");
    const bool s_is_one = (s.real() == 1.0 && s.imag() == 0.0);
    if (D == 0.0 && !s_is_one && !(s.real() > 1.0))
        throw std::invalid_argument("laplace_kernel_check: D = 0 needs s = 1 or re(s) > 1");

    const double U = half_width;
    const GLRule& rule = gl_rule(16);

    // Panels sized to the local phase speed |D| + |s|/|a+iu|; 16 nodes cover at
    // most ~2 oscillations, so Gauss-Legendre error stays far below the tail.
    Kahan acc_re, acc_im;
    double u0 = 0.0;
    while (u0 < U) {
        const double freq = std::fabs(D) + (std::abs(s) + 1.0) / std::hypot(a, u0);
        const double grow = std::max(1.0, 0.25 * (a + u0));
        const double w = std::min({U - u0, grow, 4.0 * std::numbers::pi / freq});
        const double mid = u0 + 0.5 * w, half = 0.5 * w;
        for (int i = 0; i < 16; ++i) {
            const cplx f = folded_integrand(s, a, D, mid + half * rule.x[i]);
            acc_re.add(half * rule.w[i] * f.real());
            acc_im.add(half * rule.w[i] * f.imag());
        }
        u0 += w;
    }
    const cplx value = cplx(acc_re.value(), acc_im.value()) / (2.0 * std::numbers::pi);

    cplx target;
    double tail;
    const double edge = std::hypot(a, U);
    if (D > 0.0) {
        target = std::exp((s - 1.0) * std::log(D) - a * D - log_gamma(s));
        tail = std::pow(edge, -s.real()) / (std::numbers::pi * D);
    } else if (D < 0.0) {
        target = 0.0;
        tail = std::pow(edge, -s.real()) / (std::numbers::pi * -D);
    } else if (s_is_one) {
        target = 0.5;
        tail = a / (std::numbers::pi * U);  // exact tail of (1/pi) arctan(U/a)
    } else {
        target = 0.0;
        tail = std::pow(edge, 1.0 - s.real()) / (std::numbers::pi * (s.real() - 1.0));
    }
    return {value, std::abs(value - target), tail};
}

}  // namespace cesaro
