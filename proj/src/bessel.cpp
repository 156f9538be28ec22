#include "cesaro/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cesaro/kahan.hpp"
#include "cesaro/quadrature.hpp"

namespace cesaro {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = std::numeric_limits<double>::epsilon();
const cplx kI(0.0, 1.0);

// ----------------------------------------------------------------- series ---

// Scaled ascending series: J = e^{lt0} * sum, lt0 = nu log(u/2) - log Gamma(nu+1),
// sum = Sigma_m (-q)^m / (m! (nu+1)_m), q = u^2/4.  The scaling keeps the huge
// (u/2)^nu / Gamma(nu+1) prefactor out of the partial sums.
cplx series_log_parts(cplx nu, double u, cplx& sum_out) {
    cplx lt0 = nu * std::log(cplx(u / 2.0)) - log_gamma(nu + 1.0);
    const double q = u * u / 4.0;
    cplx term = 1.0, sum = 1.0;
    const int cap = static_cast<int>(u) + 200;
    for (int m = 0; m < cap; ++m) {
        term *= -q / ((m + 1.0) * (nu + (m + 1.0)));
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) break;
        if (std::abs(term) < std::numeric_limits<double>::min()) break;
    }
    sum_out = sum;
    return lt0;
}

cplx series_eval(cplx nu, double u) {
    cplx sum;
    cplx lt0 = series_log_parts(nu, u, sum);
    return std::exp(lt0) * sum;
}

cplx series_log_eval(cplx nu, double u) {
    cplx sum;
    cplx lt0 = series_log_parts(nu, u, sum);
    return lt0 + std::log(sum);
}

// ---------------------------------------------------------------- Poisson ---

// int_0^1 (1-t^2)^{nu-1/2} cos(ut) dt for re(nu) > -1/2.
//
// The integral equals (1/2) int_{-1}^{1} g(t) e^{iut} dt with g = (1-t^2)^{nu-1/2}
// even, and its value is an endpoint residue ~ u^{-nu-1/2} while the integrand
// carries O(1) oscillating mass, so raw quadrature loses ~ eps u^{re nu + 1/2}
// relative accuracy at large u.  Integrating by parts k times fixes that: all
// boundary terms vanish (t = +-1 because g does, t = 0 because g^(j) with the
// sin factor is odd), leaving
//   I = s_k u^{-k} int_0^1 p_k(t) (1-t^2)^{nu-1/2-k} trig_k(ut) dt,
// trig_k = cos (k even) / sin (k odd), s_k = -1 iff (k+1)/2 is odd, and
// p_{j+1} = (1-t^2) p_j' - 2(nu-1/2-j) t p_j, p_0 = 1.  Each part trades one
// power of u for a factor ~ |nu|, so parts are taken only while u dominates.
//
// The remaining quadrature runs in two regions:
//   A: t in [0, 1/2], uniform panels sized to resolve both trig(ut) and the
//      phase im(nu) log(1-t^2);
//   B: y = 1-t in (0, 1/2], dyadic levels with sub-panels, graded into the
//      integrable y^{nu-1/2-k} endpoint singularity.
struct PoissonIntegral {
    cplx value;
    double tail;  // bound on the dropped y -> 0 remainder
};

PoissonIntegral poisson_integral(cplx nu, double u) {
    const GLRule& gl = gl_rule(16);
    const double sigma = nu.real();
    const double tau = std::abs(nu.imag());

    int k = 0;
    while (k < 6 && k + 1.0 <= sigma + 0.4 && u > 12.0 * (std::abs(nu) + k + 3.0)) ++k;
    std::vector<cplx> poly{1.0};
    for (int j = 0; j < k; ++j) {
        const cplx m2 = 2.0 * (nu - 0.5 - static_cast<double>(j));
        std::vector<cplx> next(poly.size() + 1, 0.0);
        for (std::size_t s = 0; s < next.size(); ++s) {
            if (s + 1 < poly.size()) next[s] += (s + 1.0) * poly[s + 1];
            if (s >= 1) next[s] -= ((s - 1.0) + m2) * poly[s - 1];
        }
        poly = std::move(next);
    }
    auto peval = [&](double t) {
        cplx v = 0.0;
        for (std::size_t i = poly.size(); i-- > 0;) v = v * t + poly[i];
        return v;
    };
    const bool use_cos = k % 2 == 0;
    auto trig = [&](double a) { return use_cos ? std::cos(a) : std::sin(a); };

    const cplx em = nu - 0.5 - static_cast<double>(k);
    Kahan acc_re, acc_im;
    auto add_panel = [&](double a, double b, auto&& fn) {
        const double c = 0.5 * (a + b), r = 0.5 * (b - a);
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            cplx v = fn(c + r * gl.x[i]) * (r * gl.w[i]);
            acc_re.add(v.real());
            acc_im.add(v.imag());
        }
    };

    // Region A.
    auto fa = [&](double t) {
        return peval(t) * std::exp(em * std::log(cplx(1.0 - t * t))) * trig(u * t);
    };
    double wa = 10.0 / (u + 1.4 * tau + 1.0);
    int na = static_cast<int>(std::ceil(0.5 / std::min(wa, 0.5)));
    wa = 0.5 / na;
    for (int p = 0; p < na; ++p) add_panel(p * wa, (p + 1) * wa, fa);

    // Region B.
    auto fb = [&](double y) {
        return peval(1.0 - y) * std::exp(em * std::log(cplx(y * (2.0 - y)))) *
               trig(u * (1.0 - y));
    };
    const double p_half = sigma + 0.5 - k;  // > 0 by precondition and the k cap
    double poly_mass = 0.0;
    for (const cplx& c : poly) poly_mass += std::abs(c);
    const double em_fac = std::max(std::pow(2.0, em.real()), 1.0);
    const int sub_nu = 1 + static_cast<int>(std::ceil(0.14 * tau));
    double tail = 0.0;
    for (int m = 1; m <= 980; ++m) {
        const double ylo = std::ldexp(1.0, -m - 1), yhi = std::ldexp(1.0, -m);
        const int sub = sub_nu + static_cast<int>(u * (yhi - ylo) / 10.0);
        const double wb = (yhi - ylo) / sub;
        for (int p = 0; p < sub; ++p) add_panel(ylo + p * wb, ylo + (p + 1) * wb, fb);
        // |int_0^{ylo}| <= max|p_k| max(2^{re em}, 1) int_0^{ylo} y^{re em} dy
        tail = poly_mass * em_fac * std::pow(ylo, p_half) / p_half;
        double mag = std::hypot(acc_re.value(), acc_im.value());
        if (tail <= 1e-17 * (mag + 1e-300)) break;
    }

    const double sign = ((k + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    const double scale = sign * std::pow(u, -static_cast<double>(k));
    PoissonIntegral out;
    out.value = scale * cplx(acc_re.value(), acc_im.value());
    out.tail = tail * std::abs(scale);
    double rel = tail / (std::hypot(acc_re.value(), acc_im.value()) + 1e-300);
    if (rel > 1e-10)
        throw std::runtime_error(
            "poisson quadrature did not converge: achieved relative tolerance " +
            std::to_string(rel));
    return out;
}

cplx poisson_log_prefactor(cplx nu, double u) {
    return std::log(2.0) + nu * std::log(cplx(u / 2.0)) - 0.5 * std::log(kPi) -
           log_gamma(nu + 0.5);
}

cplx poisson_eval(cplx nu, double u) {
    if (nu.real() <= -0.5)
        throw std::invalid_argument("poisson regime requires re(nu) > -1/2");
    PoissonIntegral pi_int = poisson_integral(nu, u);
    cplx lpref = poisson_log_prefactor(nu, u);
    if (lpref.real() > 700.0)
        throw std::runtime_error("poisson prefactor overflows; use log_bessel_j");
    return std::exp(lpref) * pi_int.value;
}

// ------------------------------------------------------------- asymptotic ---

// Hankel P/Q correction series: a_m = a_{m-1} (mu - (2m-1)^2) / (8 m u),
// mu = 4 nu^2; P = a_0 - a_2 + a_4 - ..., Q = a_1 - a_3 + ... .  Summed
// adaptively to the smallest term (the expansion is asymptotic, not
// convergent), capped at 20 terms.
void hankel_pq(cplx nu, double u, cplx& P, cplx& Q) {
    const cplx mu = 4.0 * nu * nu;
    cplx a = 1.0;
    P = 1.0;
    Q = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    int sign_p = -1, sign_q = 1;  // sign of the next even / odd contribution
    for (int m = 1; m <= 20; ++m) {
        double tm = 2.0 * m - 1.0;
        a *= (mu - tm * tm) / (8.0 * m * u);
        double am = std::abs(a);
        if (am >= prev) break;  // past the smallest term
        prev = am;
        if (m % 2 == 1) {
            Q += static_cast<double>(sign_q) * a;
            sign_q = -sign_q;
        } else {
            P += static_cast<double>(sign_p) * a;
            sign_p = -sign_p;
        }
        if (am < 1e-17 * (std::abs(P) + std::abs(Q))) break;
    }
}

cplx asymptotic_eval(cplx nu, double u) {
    cplx P, Q;
    hankel_pq(nu, u, P, Q);
    cplx w = u - nu * (kPi / 2.0) - kPi / 4.0;
    if (std::abs(w.imag()) > 700.0)
        throw std::runtime_error("asymptotic cos overflows; use log_bessel_j");
    return std::sqrt(2.0 / (kPi * u)) * (P * std::cos(w) - Q * std::sin(w));
}

// P cos w - Q sin w = e^{iw}(P + iQ)/2 + e^{-iw}(P - iQ)/2; for im(nu) >= 0 the
// e^{iw} exponential dominates (|e^{iw}| = e^{pi im(nu)/2}), so its log is
// taken exactly and the other enters through log1p.  This is the fusion that
// keeps Gamma(rho/ell) x J products finite when each factor alone overflows.
cplx log_fused_hankel(cplx nu, double u) {
    cplx P, Q;
    hankel_pq(nu, u, P, Q);
    const cplx w = u - nu * (kPi / 2.0) - kPi / 4.0;
    const cplx half_amp = 0.5 * std::log(2.0 / (kPi * u));
    if (nu.imag() >= 0.0) {
        cplx dom = P + kI * Q, sub = P - kI * Q;
        return half_amp + kI * w + std::log(0.5 * dom) +
               std::log(1.0 + std::exp(-2.0 * kI * w) * (sub / dom));
    }
    cplx dom = P - kI * Q, sub = P + kI * Q;
    return half_amp - kI * w + std::log(0.5 * dom) +
           std::log(1.0 + std::exp(2.0 * kI * w) * (sub / dom));
}

// ------------------------------------------- saddle-point (Sonine) contour ---

// J_nu(u) = (u/2)^nu (1/(2 pi i)) int_H e^{s - A/s} s^{-nu-1} ds, A = u^2/4.
// Phase f(s) = s - A/s - w log s, w = nu + 1; saddles solve s^2 - w s + A = 0.
// The contour is deformed onto steepest-descent paths f(s(v)) = f(s0) - v^2,
// followed by Newton continuation in v and integrated by trapezoid (h = 0.25,
// |v| <= 6).  For |im nu| >= 5 the saddles are well separated
// (|w^2 - 4A| >= 2 re(w) |im nu|), so the paths never interact.
namespace nsd {

cplx f(cplx s, double A, cplx w) { return s - A / s - w * std::log(s); }
cplx fp(cplx s, double A, cplx w) { return 1.0 + A / (s * s) - w / s; }
cplx fpp(cplx s, double A, cplx w) { return (w - 2.0 * A / s) / (s * s); }

// One saddle's contribution Sigma_v e^{-v^2} s'(v) * h / (2 pi i), with the
// traversal direction fixed by the caller (upper saddle left-moving, lower
// right-moving: the counterclockwise Hankel loop).
cplx saddle_contrib(cplx s0, double A, cplx w, bool left_moving, cplx& f0_out) {
    const double h = 0.25, V = 6.0;
    const cplx f0 = f(s0, A, w);
    f0_out = f0;
    cplx d0 = std::sqrt(-2.0 / fpp(s0, A, w));
    const bool flip = left_moving ? (d0.real() > 0 || (d0.real() == 0 && d0.imag() < 0))
                                  : (d0.real() < 0 || (d0.real() == 0 && d0.imag() < 0));
    if (flip) d0 = -d0;
    const int n_max = static_cast<int>(V / h);
    cplx total = d0;  // v = 0 node of the trapezoid
    for (int dir = 0; dir < 2; ++dir) {
        const double sgn = dir == 0 ? 1.0 : -1.0;
        cplx s_prev = s0;
        cplx ds_prev = d0;  // ds/dv is continuous through the saddle
        for (int n = 1; n <= n_max; ++n) {
            const double v = sgn * n * h;
            cplx s = s_prev + ds_prev * (sgn * h);
            const cplx target = f0 - v * v;
            bool ok = false;
            for (int it = 0; it < 16; ++it) {
                cplx fps = fp(s, A, w);
                cplx step = (f(s, A, w) - target) / fps;
                s -= step;
                // f carries absolute rounding noise ~ eps * fscale, so the
                // Newton step cannot resolve below that noise / |f'|.
                double fscale = std::abs(s) + A / std::abs(s) +
                                std::abs(w) * std::abs(std::log(s));
                double tol = std::max(1e-13 * (1.0 + std::abs(s)),
                                      8.0 * kEps * fscale / std::abs(fps));
                if (std::abs(step) <= tol) {
                    ok = true;
                    break;
                }
            }
            if (!ok)
                throw std::runtime_error("saddle path continuation stalled at v = " +
                                         std::to_string(v));
            total += std::exp(-v * v) * (-2.0 * v / fp(s, A, w));
            ds_prev = (s - s_prev) / (sgn * h);
            s_prev = s;
        }
    }
    return total * (h / (2.0 * kPi)) * (-kI);  // h / (2 pi i)
}

cplx log_bessel(cplx nu, double u) {
    const double A = u * u / 4.0;
    const cplx w = nu + 1.0;
    const cplx disc = std::sqrt(w * w - 4.0 * A);
    const cplx r1 = 0.5 * (w + disc), r2 = 0.5 * (w - disc);
    const cplx s_hi = r1.imag() >= r2.imag() ? r1 : r2;
    const cplx s_lo = r1.imag() >= r2.imag() ? r2 : r1;
    cplx f_hi;
    cplx contrib = saddle_contrib(s_hi, A, w, true, f_hi);
    const cplx f_lo = f(s_lo, A, w);
    if ((f_lo - f_hi).real() > -42.0) {
        cplx f_lo_chk;
        contrib += std::exp(f_lo - f_hi) * saddle_contrib(s_lo, A, w, false, f_lo_chk);
    }
    return nu * std::log(cplx(u / 2.0)) + f_hi + std::log(contrib);
}

}  // namespace nsd

}  // namespace

// ------------------------------------------------------------- public API ---

BesselRegime series_regime(cplx nu) {
    return {BesselMode::series, 0.0, std::max(10.0, std::abs(nu))};
}

BesselRegime poisson_regime(cplx nu) {
    return {BesselMode::poisson_quadrature, 5.0, 2e3 * (1.0 + std::abs(nu.imag()))};
}

BesselRegime asymptotic_regime(cplx nu) {
    return {BesselMode::asymptotic, 1e3 * (1.0 + std::abs(nu.imag())),
            std::numeric_limits<double>::infinity()};
}

BesselRegime select_regime(cplx nu, double u) {
    if (u <= series_regime(nu).switch_hi) return series_regime(nu);
    if (u >= asymptotic_regime(nu).switch_lo) return asymptotic_regime(nu);
    return poisson_regime(nu);
}

cplx bessel_j(cplx nu, double u, const BesselRegime& regime) {
    if (!(u > 0.0)) throw std::invalid_argument("bessel_j requires u > 0");
    switch (regime.mode) {
        case BesselMode::series:
            return series_eval(nu, u);
        case BesselMode::poisson_quadrature:
            return poisson_eval(nu, u);
        case BesselMode::asymptotic:
            return asymptotic_eval(nu, u);
    }
    throw std::invalid_argument("bessel_j: unknown regime mode");
}

cplx bessel_j(cplx nu, double u) { return bessel_j(nu, u, select_regime(nu, u)); }

cplx log_bessel_j(cplx nu, double u) {
    if (!(u > 0.0)) throw std::invalid_argument("log_bessel_j requires u > 0");
    // J_conj(nu)(u) = conj(J_nu(u)); the saddle bookkeeping below assumes
    // im(nu) >= 0, so reduce the lower half-plane to it exactly.
    if (nu.imag() < 0.0) return std::conj(log_bessel_j(std::conj(nu), u));
    const double a1 = std::abs(4.0 * nu * nu - 1.0) / (8.0 * u);
    if (a1 <= 0.125) return log_fused_hankel(nu, u);
    // The series partial sums cancel like e^{|nu| g(u/|nu|)}; use it only where
    // that loss is bounded (tiny u) or absent (terms decay from the start).
    if (u <= 10.0 || u * u / 4.0 <= 0.9 * (std::abs(nu) + 1.0))
        return series_log_eval(nu, u);
    if (std::abs(nu.imag()) >= 5.0) return nsd::log_bessel(nu, u);
    // Nearly real order at moderate u: Poisson integral in log form.
    if (nu.real() <= -0.5)
        throw std::invalid_argument(
            "log_bessel_j: re(nu) <= -1/2 with |im(nu)| < 5 is outside every stable route");
    PoissonIntegral pi_int = poisson_integral(nu, u);
    return poisson_log_prefactor(nu, u) + std::log(pi_int.value);
}

double log_bessel_mag_estimate(cplx nu, double u) {
    const double A = u * u / 4.0;
    const cplx w = nu + 1.0;
    const cplx disc = std::sqrt(w * w - 4.0 * A);
    const cplx base = nu * std::log(cplx(u / 2.0));
    double best = -std::numeric_limits<double>::infinity();
    for (cplx s0 : {0.5 * (w + disc), 0.5 * (w - disc)}) {
        double e = (base + nsd::f(s0, A, w)).real() + 0.5 * std::log(2.0) -
                   0.5 * std::log(std::abs(nsd::fpp(s0, A, w))) -
                   0.5 * std::log(4.0 * kPi);
        best = std::max(best, e);
    }
    return best;
}

SonineCheck sonine_contour_check(cplx nu, double u, double t_max) {
    if (!(u > 0.0)) throw std::invalid_argument("sonine_contour_check requires u > 0");
    if (nu.real() <= 0.0)
        throw std::invalid_argument(
            "sonine_contour_check requires re(nu) > 0 for a decaying truncation tail");
    if (!(t_max > 1.0)) throw std::invalid_argument("sonine_contour_check requires t_max > 1");
    const double A = u * u / 4.0;
    const GLRule& gl = gl_rule(16);
    const cplx wexp = nu + 1.0;
    auto g = [&](double t) {
        cplx s(1.0, t);
        return std::exp(s - A / s - wexp * std::log(s));
    };
    auto freq = [&](double t) {
        double h2 = 1.0 + t * t;
        return 1.0 + A / h2 + std::abs(wexp) / std::sqrt(h2);
    };
    Kahan acc_re, acc_im;
    double t0 = -t_max;
    while (t0 < t_max) {
        double fw = std::max(freq(t0), freq(std::min(t0 + 10.0 / freq(t0), t_max)));
        double t1 = std::min(t0 + 10.0 / fw, t_max);
        const double c = 0.5 * (t0 + t1), r = 0.5 * (t1 - t0);
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            cplx v = g(c + r * gl.x[i]) * (r * gl.w[i]);
            acc_re.add(v.real());
            acc_im.add(v.imag());
        }
        t0 = t1;
    }
    SonineCheck out;
    // ds = i dt and the 1/(2 pi i) prefactor cancel to dt / (2 pi).
    out.contour_value = std::exp(nu * std::log(cplx(u / 2.0))) *
                        cplx(acc_re.value(), acc_im.value()) / (2.0 * kPi);
    out.direct_value = bessel_j(nu, u);
    out.residual = std::abs(out.contour_value - out.direct_value);
    // |e^{s - A/s}| <= e on re(s) = 1; |s^{-nu-1}| <= e^{pi |im nu| / 2} |t|^{-re nu - 1}.
    out.tail_estimate = std::exp(1.0 + kPi * std::abs(nu.imag()) / 2.0) *
                        std::pow(t_max, -nu.real()) / (nu.real() * kPi);
    return out;
}

}  // namespace cesaro
