#include "cesaro/arith.hpp"
#include "cesaro/kahan.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cesaro {

// ---------------------------------------------------------------- sieve ----

SieveTable build_lambda_table(std::uint64_t limit) {
    if (limit == 0) throw std::invalid_argument("build_lambda_table: limit must be >= 1");
    SieveTable t;
    t.limit = limit;
    t.lambda.assign(limit + 1, 0.0);
    if (limit < 2) return t;

    std::vector<std::uint8_t> composite(limit + 1, 0);
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        if (p * p <= limit)
            for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = 1;
        const double logp = std::log(static_cast<double>(p));
        for (std::uint64_t pw = p; pw <= limit; pw *= p) {
            t.lambda[pw] = logp;
            if (pw > limit / p) break;  // next multiplication would overflow range
        }
    }
    return t;
}

double SieveTable::psi(std::uint64_t x) const {
    assert(x <= limit && "psi: x beyond sieve limit");
    Kahan acc;
    for (std::uint64_t m = 1; m <= x; ++m) acc.add(lambda[m]);
    return acc.value();
}

void CesaroParams::validate(bool strict) const {
    if (ell < 1) throw std::invalid_argument("CesaroParams: ell must be >= 1");
    if (n_cap < 2) throw std::invalid_argument("CesaroParams: N must be >= 2");
    if (!(k > 0.5)) throw std::invalid_argument("CesaroParams: k must exceed 1/2");
    if (strict && !(k > 1.0))
        throw std::invalid_argument("CesaroParams: strict mode requires k > 1");
}

// ---------------------------------------------------------------- roots ----

namespace {

// m^e with saturation; only used for e-th powers of small candidates.
std::uint64_t ipow_sat(std::uint64_t m, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (m != 0 && r > std::numeric_limits<std::uint64_t>::max() / m)
            return std::numeric_limits<std::uint64_t>::max();
        r *= m;
    }
    return r;
}

}  // namespace

std::uint64_t iroot(std::uint64_t m, int ell) {
    assert(ell >= 1);
    if (ell == 1 || m < 2) return m;
    std::uint64_t r = static_cast<std::uint64_t>(
        std::llround(std::pow(static_cast<double>(m), 1.0 / ell)));
    if (r > 0 && ipow_sat(r, ell) > m) --r;          // float root overshot
    while (ipow_sat(r + 1, ell) <= m) ++r;           // or undershot
    return r;
}

std::uint64_t exact_root(std::uint64_t m, int ell) {
    if (ell == 1) return m;
    const std::uint64_t r = iroot(m, ell);
    return (r >= 1 && ipow_sat(r, ell) == m) ? r : 0;
}

// ----------------------------------------------------- representation counts ----

double rep_count(std::uint64_t n, int ell, const SieveTable& table) {
    if (n < 2) return 0.0;
    if (iroot(n - 1, ell) > table.limit)
        throw std::invalid_argument("rep_count: sieve table does not cover n - 1");
    Kahan acc;
    for (std::uint64_t m2 = 1; m2 * m2 < n; ++m2) {
        const std::uint64_t root = exact_root(n - m2 * m2, ell);
        if (root >= 1) acc.add(table.lambda[root]);
    }
    return acc.value();
}

std::vector<double> rep_count_all(std::uint64_t N, int ell, const SieveTable& table) {
    std::vector<double> r(N + 1, 0.0);
    if (N < 2) return r;
    const std::uint64_t m1_max = iroot(N - 1, ell);
    if (m1_max > table.limit)
        throw std::invalid_argument("rep_count_all: sieve table does not cover N - 1");
    for (std::uint64_t m1 = 1; m1 <= m1_max; ++m1) {
        const double lam = table.lambda[m1];
        if (lam == 0.0) continue;
        const std::uint64_t base = ipow_sat(m1, ell);
        for (std::uint64_t m2 = 1; base + m2 * m2 <= N; ++m2) r[base + m2 * m2] += lam;
    }
    return r;
}

double direct_cesaro(const CesaroParams& params, const SieveTable& table) {
    const std::uint64_t N = params.n_cap;
    if (N < 2) return 0.0;
    const std::vector<double> r = rep_count_all(N, params.ell, table);
    const double invN = 1.0 / static_cast<double>(N);
    Kahan acc;
    for (std::uint64_t n = 2; n <= N; ++n) {
        if (r[n] == 0.0) continue;
        // (N - n)/N is exact in the integers; n = N contributes weight 0
        const double w = std::pow(static_cast<double>(N - n) * invN, params.k);
        acc.add(r[n] * w);
    }
    return acc.value() / std::tgamma(params.k + 1.0);
}

// --------------------------------------------- generating-function identity ----

ExpSumCheck exp_sum_identity_check(double a, int ell, std::uint64_t cutoff,
                                   const SieveTable& table) {
    if (!(a > 0.0)) throw std::invalid_argument("exp_sum_identity_check: a must be > 0");
    if (ell < 1) throw std::invalid_argument("exp_sum_identity_check: ell must be >= 1");

    // terms below e^{-46} are invisible at double precision relative to the sums
    const double arg_cap = 46.0;
    ExpSumCheck out;
    out.cutoff_ok = (a * static_cast<double>(cutoff) >= 34.0);

    // S_ell(a) = sum Lambda(m) e^{-m^ell a}, ascending m
    Kahan s;
    for (std::uint64_t m = 1; m <= table.limit; ++m) {
        if (table.lambda[m] == 0.0) continue;
        const double arg = a * std::pow(static_cast<double>(m), static_cast<double>(ell));
        if (arg > arg_cap) break;
        s.add(table.lambda[m] * std::exp(-arg));
    }
    const double s_ell = s.value();

    // omega2(a) = sum e^{-m^2 a}
    Kahan w;
    for (std::uint64_t m = 1;; ++m) {
        const double arg = a * static_cast<double>(m) * static_cast<double>(m);
        if (arg > arg_cap) break;
        w.add(std::exp(-arg));
    }
    out.rhs = s_ell * w.value();

    // direct side from the same table
    const std::vector<double> r = rep_count_all(cutoff, ell, table);
    Kahan l;
    for (std::uint64_t n = 2; n <= cutoff; ++n) {
        const double arg = a * static_cast<double>(n);
        if (arg > arg_cap) break;
        if (r[n] != 0.0) l.add(r[n] * std::exp(-arg));
    }
    out.lhs = l.value();
    out.residual = std::fabs(out.lhs - out.rhs);
    out.pnt_ratio = s_ell * ell * std::pow(a, 1.0 / ell) / std::tgamma(1.0 / ell);
    return out;
}

}  // namespace cesaro
