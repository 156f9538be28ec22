#include "cesaro/explicit.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cesaro/bessel.hpp"
#include "cesaro/kahan.hpp"
#include "cesaro/specfun.hpp"

namespace cesaro {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)
constexpr double kGamma1 = 14.13;                  // first ordinate, for padding

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Full-series pads for empty-input cases: tail_bound_* covers gamma > 50;
// the nine ordinates below 50 are covered by nine copies of the largest
// (gamma_1) per-zero envelope.
double full_bound_m23(double k, int ell, double N, M23Variant v) {
    const double c = v == M23Variant::m2 ? 1.5 : 1.0;
    const double pref = v == M23Variant::m2 ? std::sqrt(kPi) / (2.0 * ell) : 0.5 / ell;
    const double n_exp = v == M23Variant::m2 ? 0.5 / ell + 0.5 : 0.5 / ell;
    const double low = 9.0 * 4.0 * pref * std::pow(kGamma1 / ell, -(k + c)) *
                       std::pow(N, n_exp);
    return low + tail_bound_m2m3(50.0, k, ell, N, v);
}

double full_bound_m6(double k, int ell, double N) {
    const double eps = (k - 1.0) / 2.0;
    const double n_exp = 0.25 - k / 2.0 + 0.5 / ell;
    const double low = 9.0 * 4.0 * std::pow(N, n_exp) * std::pow(kGamma1, -(1.0 + eps));
    return low + tail_bound_m6(50.0, k, ell, N);
}

void check_height(const ZeroSet& zeros, const TruncationConfig& trunc) {
    if (zeros.gammas.empty()) return;
    if (!(trunc.zero_height_T > 0.0))
        throw std::invalid_argument("zero sum: zero_height_T must be positive");
    if (trunc.zero_height_T > zeros.height)
        throw std::invalid_argument(
            "zero sum: zero_height_T exceeds the loaded zero height " +
            std::to_string(zeros.height));
}

// The closed-form cut bounds need T >= 50; below that fall back to the
// (conservative) full-series bound.
double m23_cut_tail(double T, double k, int ell, double N, M23Variant v) {
    return T >= 50.0 ? tail_bound_m2m3(T, k, ell, N, v) : full_bound_m23(k, ell, N, v);
}

double m6_cut_tail(double T, double k, int ell, double N) {
    return T >= 50.0 ? tail_bound_m6(T, k, ell, N) : full_bound_m6(k, ell, N);
}

// Shared M2/M3 worker.  Term at rho: pref * exp(lgG(z) - lgG(k+c+z) +
// (z + extra) log N), z = rho/ell; conjugates contribute as 2 re.  The
// imaginary leakage is measured by explicitly evaluating the mirrored term.
TermValue zero_gamma_sum(const CesaroParams& params, const ZeroSet& zeros,
                         const TruncationConfig& trunc, M23Variant variant) {
    const double k = params.k;
    const int ell = params.ell;
    const double N = static_cast<double>(params.n_cap);
    if (variant == M23Variant::m2 && !(k > -0.5))
        throw std::invalid_argument("eval_m2: requires k > -1/2");
    if (variant == M23Variant::m3 && !(k > 0.0))
        throw std::invalid_argument("eval_m3: requires k > 0");
    check_height(zeros, trunc);

    const double c = variant == M23Variant::m2 ? 1.5 : 1.0;
    const double pref =
        variant == M23Variant::m2 ? -std::sqrt(kPi) / (2.0 * ell) : 0.5 / ell;
    const double extra = variant == M23Variant::m2 ? 0.5 : 0.0;

    TermValue out;
    if (zeros.gammas.empty()) {
        out.tail = full_bound_m23(k, ell, N, variant);
        return out;
    }

    const double logN = std::log(N);
    const std::size_t n = zeros.count_below(trunc.zero_height_T);
    Kahan acc, leak;
    for (std::size_t idx = 0; idx < n; ++idx) {
        const std::size_t i = trunc.debug_reverse_zero_order ? n - 1 - idx : idx;
        const cplx z(0.5 / ell, zeros.gammas[i] / ell);
        const cplx t_up =
            pref * std::exp(log_gamma(z) - log_gamma(k + c + z) + (z + extra) * logN);
        acc.add(2.0 * t_up.real());
        const cplx zc = std::conj(z);
        const cplx t_dn =
            pref * std::exp(log_gamma(zc) - log_gamma(k + c + zc) + (zc + extra) * logN);
        leak.add(std::abs((t_up + t_dn).imag()));
    }
    out.value = acc.value();
    out.imag_leakage = leak.value();
    out.tail = m23_cut_tail(trunc.zero_height_T, k, ell, N, variant);
    return out;
}

// Shared M5/M7 worker: pref * N^{n_exp} * sum_j J_order(2 pi j sqrt N)/j^order,
// ascending j with compensated summation; tail via |J(u)| <~ u^{-1/2}.
// debug_reverse_zero_order flips the j reduction order here as well.
TermValue bessel_real_sum(const CesaroParams& params, const TruncationConfig& trunc,
                          double order, double pref, double n_exp) {
    const double k = params.k;
    const double N = static_cast<double>(params.n_cap);
    const double tail_scale =
        4.0 * std::abs(pref) * std::pow(N, n_exp - 0.25);  // drops the u^{1/2}
    TermValue out;
    if (trunc.bessel_jmax <= 0) {
        out.tail = tail_scale * (1.0 + 1.0 / k);
        return out;
    }
    const double u1 = 2.0 * kPi * std::sqrt(N);
    Kahan acc, leak;
    const bool rev = trunc.debug_reverse_zero_order;
    for (int i = 1; i <= trunc.bessel_jmax; ++i) {
        const int j = rev ? trunc.bessel_jmax + 1 - i : i;
        cplx Jv = bessel_j(cplx(order, 0.0), u1 * j);
        const double denom = std::pow(static_cast<double>(j), order);
        acc.add(Jv.real() / denom);
        leak.add(std::abs(Jv.imag()) / denom);
    }
    out.value = pref * std::pow(N, n_exp) * acc.value();
    out.imag_leakage = std::abs(pref) * std::pow(N, n_exp) * leak.value();
    out.tail = tail_scale * std::pow(static_cast<double>(trunc.bessel_jmax), -k) / k;
    return out;
}

// ------------------------------------------------------------------- M6 ----

// One fused term: exp(lp + lgG(z) + z log(sqrt N/pi) + log J_nu(u_j) - nu log j).
// The e^{-pi gamma/(2l)} Gamma decay and e^{+pi gamma/(2l)} Bessel growth cancel
// inside the exponent, which must stay moderate; guarded explicitly.
struct M6ZeroCtx {
    cplx z, nu, g_up, g_dn;
    double re_scale;  // lp + re(g_up), the gamma-side magnitude in logs
};

TermValue eval_m6_impl(const CesaroParams& params, const ZeroSet& zeros,
                       const TruncationConfig& trunc, bool relax_hypothesis) {
    const double k = params.k;
    const int ell = params.ell;
    const double N = static_cast<double>(params.n_cap);
    if (!relax_hypothesis && !(k > 1.0))
        throw std::invalid_argument("eval_m6: requires k > 1");
    check_height(zeros, trunc);

    TermValue out;
    if (zeros.gammas.empty() || trunc.bessel_jmax <= 0) {
        out.tail = relax_hypothesis ? 0.0 : full_bound_m6(k, ell, N);
        return out;
    }

    const double sqrtN = std::sqrt(N);
    const double u1 = 2.0 * kPi * sqrtN;
    const double lp = (0.25 - k / 2.0) * std::log(N) - k * std::log(kPi);
    const double log_c = std::log(sqrtN / kPi);
    const double eps_budget = trunc.target_tolerance;
    const std::size_t n = zeros.count_below(trunc.zero_height_T);
    const int jmax = trunc.bessel_jmax;

    Kahan acc, leak;
    double skip_mass = 0.0;

    auto make_ctx = [&](std::size_t i) {
        M6ZeroCtx ctx;
        ctx.z = cplx(0.5 / ell, zeros.gammas[i] / ell);
        ctx.nu = k + 0.5 + ctx.z;
        ctx.g_up = log_gamma(ctx.z) + ctx.z * log_c;
        ctx.g_dn = log_gamma(std::conj(ctx.z)) + std::conj(ctx.z) * log_c;
        ctx.re_scale = lp + ctx.g_up.real();
        return ctx;
    };
    auto add_term = [&](const M6ZeroCtx& ctx, int j) {
        const double lj = std::log(static_cast<double>(j));
        const cplx lb = log_bessel_j(ctx.nu, u1 * j);
        const cplx e_up = lp + ctx.g_up + lb - ctx.nu * lj;
        if (!(e_up.real() < 700.0))
            throw std::logic_error(
                "eval_m6: fused exponent overflow; impossible by construction");
        const cplx t_up = std::exp(e_up);
        const cplx t_dn =
            std::exp(lp + ctx.g_dn + std::conj(lb) - std::conj(ctx.nu) * lj);
        acc.add(2.0 * t_up.real());
        leak.add(std::abs((t_up + t_dn).imag()));
    };
    // Per zero, the shortest prefix [1, stop) whose complement is negligible:
    // env[j] bounds 2|term_j| via the cheap saddle-magnitude estimate, and the
    // exact suffix sums of env decide the cut (no decay-shape assumption; the
    // envelope is not monotone in j below the Bessel turning point).  The cut
    // is a pure function of the zero alone, so both loop orders and both zero
    // directions visit exactly the same (zero, j) set.
    std::vector<double> env(static_cast<std::size_t>(jmax) + 1);
    auto zero_pass = [&](const M6ZeroCtx& ctx) {
        for (int j = 1; j <= jmax; ++j)
            env[j] = 2.0 * std::exp(ctx.re_scale + log_bessel_mag_estimate(ctx.nu, u1 * j) -
                                    ctx.nu.real() * std::log(static_cast<double>(j)));
        double suffix = 0.0;
        for (int j = jmax; j >= 1; --j) {
            if (4.0 * (suffix + env[j]) >= eps_budget)
                return std::pair<int, double>(j + 1, 4.0 * suffix);
            suffix += env[j];
        }
        return std::pair<int, double>(1, 4.0 * suffix);
    };

    if (!trunc.debug_j_outer) {
        for (std::size_t idx = 0; idx < n; ++idx) {
            const std::size_t i = trunc.debug_reverse_zero_order ? n - 1 - idx : idx;
            const M6ZeroCtx ctx = make_ctx(i);
            const auto [stop, mass] = zero_pass(ctx);
            skip_mass += mass;
            for (int j = 1; j < stop; ++j) add_term(ctx, j);
        }
    } else {
        std::vector<M6ZeroCtx> ctxs(n);
        std::vector<int> stops(n);
        for (std::size_t i = 0; i < n; ++i) {
            ctxs[i] = make_ctx(i);
            const auto [stop, mass] = zero_pass(ctxs[i]);
            stops[i] = stop;
            skip_mass += mass;
        }
        for (int j = 1; j <= jmax; ++j)
            for (std::size_t i = 0; i < n; ++i)
                if (j < stops[i]) add_term(ctxs[i], j);
    }

    out.value = -acc.value();
    out.imag_leakage = leak.value();
    out.tail = skip_mass;
    if (!relax_hypothesis)
        out.tail += m6_cut_tail(trunc.zero_height_T, k, ell, N);
    return out;
}

}  // namespace

// ---------------------------------------------------------------- public ----

void TruncationConfig::validate(const ZeroSet& zeros) const {
    if (!zeros.gammas.empty()) {
        if (!(zero_height_T >= 50.0) || zero_height_T > zeros.height)
            throw std::invalid_argument(
                "TruncationConfig: zero_height_T must lie in [50, loaded height]");
    }
    if (bessel_jmax < 1)
        throw std::invalid_argument("TruncationConfig: bessel_jmax must be >= 1");
    if (!(target_tolerance > 0.0))
        throw std::invalid_argument("TruncationConfig: target_tolerance must be > 0");
}

double eval_m1(const CesaroParams& params) {
    const double k = params.k;
    const double il = 1.0 / params.ell;
    const double N = static_cast<double>(params.n_cap);
    const double g = std::tgamma(il) / (2.0 * params.ell);
    return std::sqrt(kPi) * g * std::pow(N, 0.5 + il) / std::tgamma(k + 1.5 + il) -
           g * std::pow(N, il) / std::tgamma(k + 1.0 + il);
}

double eval_m4(const CesaroParams& params) {
    const double N = static_cast<double>(params.n_cap);
    return -std::sqrt(kPi) * kLog2Pi / (2.0 * std::tgamma(params.k + 1.5)) *
           std::sqrt(N);
}

TermValue eval_m2(const CesaroParams& params, const ZeroSet& zeros,
                  const TruncationConfig& trunc) {
    return zero_gamma_sum(params, zeros, trunc, M23Variant::m2);
}

TermValue eval_m3(const CesaroParams& params, const ZeroSet& zeros,
                  const TruncationConfig& trunc) {
    return zero_gamma_sum(params, zeros, trunc, M23Variant::m3);
}

TermValue eval_m5(const CesaroParams& params, const TruncationConfig& trunc) {
    const double k = params.k;
    const double il = 1.0 / params.ell;
    if (!(k > 0.5 - il)) throw std::invalid_argument("eval_m5: requires k > 1/2 - 1/ell");
    const double order = k + 0.5 + il;
    const double pref = std::tgamma(il) / params.ell / std::pow(kPi, k + il);
    const double n_exp = 0.25 - k / 2.0 + 0.5 * il;
    return bessel_real_sum(params, trunc, order, pref, n_exp);
}

TermValue eval_m7(const CesaroParams& params, const TruncationConfig& trunc) {
    const double k = params.k;
    if (!(k > 0.5)) throw std::invalid_argument("eval_m7: requires k > 1/2");
    const double order = k + 0.5;
    const double pref = -kLog2Pi / std::pow(kPi, k);
    const double n_exp = 0.25 - k / 2.0;
    return bessel_real_sum(params, trunc, order, pref, n_exp);
}

TermValue eval_m6(const CesaroParams& params, const ZeroSet& zeros,
                  const TruncationConfig& trunc) {
    return eval_m6_impl(params, zeros, trunc, false);
}

EvalReport evaluate(const CesaroParams& params, const ZeroSet& zeros,
                    const TruncationConfig& trunc, const SieveTable& table) {
    params.validate(false);
    trunc.validate(zeros);
    EvalReport rep;
    rep.params = params;

    double t0 = now_s();
    rep.direct = direct_cesaro(params, table);
    double t1 = now_s();
    rep.timings.direct_s = t1 - t0;

    rep.terms.m[0] = eval_m1(params);
    rep.terms.m[3] = eval_m4(params);
    double t2 = now_s();
    rep.timings.closed_s = t2 - t1;

    const TermValue m2 = eval_m2(params, zeros, trunc);
    const TermValue m3 = eval_m3(params, zeros, trunc);
    double t3 = now_s();
    rep.timings.zero_s = t3 - t2;

    const TermValue m5 = eval_m5(params, trunc);
    const TermValue m7 = eval_m7(params, trunc);
    double t4 = now_s();
    rep.timings.bessel_s = t4 - t3;

    rep.m6_tail_unreliable = params.warning_mode();
    const TermValue m6 = eval_m6_impl(params, zeros, trunc, rep.m6_tail_unreliable);
    rep.timings.m6_s = now_s() - t4;

    auto put = [&rep](int i, const TermValue& tv) {
        rep.terms.m[i] = tv.value;
        rep.terms.tails[i] = tv.tail;
        rep.terms.imag_leakage[i] = tv.imag_leakage;
    };
    put(1, m2);
    put(2, m3);
    put(4, m5);
    put(6, m7);
    put(5, m6);

    Kahan sum, tail;
    for (int i = 0; i < 7; ++i) {
        sum.add(rep.terms.m[i]);
        tail.add(rep.terms.tails[i]);
    }
    rep.explicit_sum = sum.value();
    rep.total_tail = tail.value();
    rep.residual = rep.direct - rep.explicit_sum;
    return rep;
}

}  // namespace cesaro
