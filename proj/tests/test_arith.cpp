#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cesaro/arith.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace cesaro;

namespace {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// independent psi(x): enumerate prime powers by trial division
double psi_direct(std::uint64_t x) {
    double s = 0.0;
    for (std::uint64_t p = 2; p <= x; ++p) {
        if (!is_prime(p)) continue;
        for (std::uint64_t pw = p; pw <= x; pw *= p) {
            s += std::log(static_cast<double>(p));
            if (pw > x / p) break;
        }
    }
    return s;
}

// naive r_{ell,2}(n): double loop over (m1, m2), plain accumulation
double rep_naive(std::uint64_t n, int ell, const SieveTable& t, std::uint64_t* hits = nullptr) {
    double s = 0.0;
    std::uint64_t cnt = 0;
    for (std::uint64_t m1 = 1;; ++m1) {
        std::uint64_t p = 1;
        bool over = false;
        for (int i = 0; i < ell; ++i) {
            if (m1 != 0 && p > n / m1) { over = true; break; }
            p *= m1;
        }
        if (over || p >= n) break;
        for (std::uint64_t m2 = 1; p + m2 * m2 <= n; ++m2)
            if (p + m2 * m2 == n && t.lambda[m1] != 0.0) { s += t.lambda[m1]; ++cnt; }
    }
    if (hits) *hits = cnt;
    return s;
}

}  // namespace

// ----------------------------------------------------------- sieve table ----

TEST_CASE("lambda table: prime-power values") {
    const SieveTable t = build_lambda_table(10);
    CHECK(t.limit == 10);
    CHECK(t.lambda[1] == 0.0);
    CHECK(t.lambda[2] == std::log(2.0));
    CHECK(t.lambda[3] == std::log(3.0));
    CHECK(t.lambda[4] == std::log(2.0));
    CHECK(t.lambda[5] == std::log(5.0));
    CHECK(t.lambda[6] == 0.0);
    CHECK(t.lambda[7] == std::log(7.0));
    CHECK(t.lambda[8] == std::log(2.0));
    CHECK(t.lambda[9] == std::log(3.0));
    CHECK(t.lambda[10] == 0.0);
}

TEST_CASE("lambda table: degenerate and invalid limits") {
    const SieveTable t = build_lambda_table(1);
    CHECK(t.limit == 1);
    CHECK(t.lambda.size() == 2);
    CHECK(t.lambda[1] == 0.0);
    CHECK_THROWS_AS(build_lambda_table(0), std::invalid_argument);
}

TEST_CASE("lambda table: psi(100) against high-precision value") {
    const SieveTable t = build_lambda_table(100);
    // frozen from 50-digit arithmetic over the 34 prime powers <= 100
    CHECK(t.psi(100) == doctest::Approx(94.045311229357392246).epsilon(1e-14));
}

TEST_CASE("lambda table: bit-identical log p across powers of the same prime") {
    const SieveTable t = build_lambda_table(100000);
    CHECK(t.lambda[8] == t.lambda[2]);
    CHECK(t.lambda[65536] == t.lambda[2]);
    CHECK(t.lambda[59049] == t.lambda[3]);
    CHECK(t.lambda[15625] == t.lambda[5]);
}

TEST_CASE("lambda table: zero off prime powers, psi nondecreasing") {
    const SieveTable t = build_lambda_table(2000);
    for (std::uint64_t m = 1; m <= 2000; ++m) {
        bool pp = false;
        for (std::uint64_t p = 2; p <= m && !pp; ++p) {
            if (!is_prime(p)) continue;
            for (std::uint64_t pw = p; pw <= m; pw *= p) {
                if (pw == m) { pp = true; break; }
                if (pw > m / p) break;
            }
        }
        if (pp) CHECK(t.lambda[m] > 0.0);
        else    CHECK(t.lambda[m] == 0.0);
    }
    double run = 0.0;
    for (std::uint64_t m = 1; m <= 2000; ++m) {
        CHECK(t.lambda[m] >= 0.0);
        run += t.lambda[m];
    }
    CHECK(run == doctest::Approx(psi_direct(2000)).epsilon(1e-13));
}

TEST_CASE("lambda table: psi matches direct prime-power enumeration to 1e4") {
    const SieveTable t = build_lambda_table(10000);
    for (std::uint64_t x : {10ull, 97ull, 1000ull, 4096ull, 9999ull, 10000ull})
        CHECK(t.psi(x) == doctest::Approx(psi_direct(x)).epsilon(1e-12));
}

// ------------------------------------------------------------ power roots ----

TEST_CASE("integer roots: floor root and exact-power detection") {
    CHECK(iroot(0, 3) == 0);
    CHECK(iroot(1, 5) == 1);
    CHECK(iroot(63, 2) == 7);
    CHECK(iroot(64, 2) == 8);
    CHECK(iroot(65, 2) == 8);
    CHECK(iroot(1000000000000000000ull, 3) == 1000000);
    CHECK(exact_root(1000000000000000000ull, 3) == 1000000);
    CHECK(exact_root(999999999999999999ull, 3) == 0);
    CHECK(exact_root(27, 3) == 3);
    CHECK(exact_root(28, 3) == 0);
    CHECK(exact_root(12, 1) == 12);

    std::mt19937_64 rng(20260815);
    for (int ell : {2, 3, 5}) {
        for (int trial = 0; trial < 2000; ++trial) {
            const std::uint64_t r = 2 + rng() % (ell == 2 ? 3000000000ull
                                                : ell == 3 ? 2000000ull : 7000ull);
            std::uint64_t m = 1;
            for (int i = 0; i < ell; ++i) m *= r;
            CHECK(iroot(m, ell) == r);
            CHECK(exact_root(m, ell) == r);
            CHECK(exact_root(m - 1, ell) == 0);
            CHECK(iroot(m - 1, ell) == r - 1);
            CHECK(exact_root(m + 1, ell) == 0);
        }
    }
}

// -------------------------------------------------- representation counts ----

TEST_CASE("rep_count: hand-checked small values") {
    const SieveTable t = build_lambda_table(100);
    CHECK(rep_count(3, 1, t) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(rep_count(13, 2, t) == doctest::Approx(std::log(6.0)).epsilon(1e-15));
    CHECK(rep_count(1, 1, t) == 0.0);
    CHECK(rep_count(1, 4, t) == 0.0);
    CHECK(rep_count(2, 1, t) == 0.0);  // 1 + 1, Lambda(1) = 0
}

TEST_CASE("rep_count: insufficient table is a precondition violation") {
    const SieveTable t = build_lambda_table(10);
    CHECK_THROWS_AS(rep_count(200, 1, t), std::invalid_argument);
    CHECK_THROWS_AS(rep_count_all(200, 1, t), std::invalid_argument);
    CHECK_NOTHROW(rep_count(101, 2, t));  // m1^2 <= 100: m1 <= 10 is covered
}

TEST_CASE("rep_count: equals naive double-loop enumeration for n <= 2000") {
    const SieveTable t = build_lambda_table(2000);
    for (int ell : {1, 2, 3}) {
        const std::vector<double> all = rep_count_all(2000, ell, t);
        for (std::uint64_t n = 1; n <= 2000; ++n) {
            const double naive = rep_naive(n, ell, t);
            CHECK(rep_count(n, ell, t) == doctest::Approx(naive).epsilon(1e-13));
            CHECK(all[n] == doctest::Approx(naive).epsilon(1e-13));
        }
    }
}

// ----------------------------------------------------------- direct sum ----

TEST_CASE("direct_cesaro: closed-form small case") {
    const SieveTable t = build_lambda_table(10);
    CesaroParams p{1, 1.0, 4};
    // only n = 3 contributes: log(2) * (1 - 3/4) / Gamma(2)
    CHECK(direct_cesaro(p, t) == doctest::Approx(std::log(2.0) / 4.0).epsilon(1e-15));
}

TEST_CASE("direct_cesaro: N below the first representable value") {
    const SieveTable t = build_lambda_table(10);
    CesaroParams p{1, 2.5, 1};
    CHECK(direct_cesaro(p, t) == 0.0);
}

TEST_CASE("direct_cesaro: exhaustive pair enumeration, ell=2, k=1.5, N=20") {
    const SieveTable t = build_lambda_table(100);
    CesaroParams p{2, 1.5, 20};
    double brute = 0.0;
    for (std::uint64_t m1 = 1; m1 * m1 < 20; ++m1)
        for (std::uint64_t m2 = 1; m1 * m1 + m2 * m2 <= 20; ++m2) {
            const std::uint64_t n = m1 * m1 + m2 * m2;
            brute += t.lambda[m1] * std::pow(1.0 - n / 20.0, 1.5);
        }
    brute /= std::tgamma(2.5);
    CHECK(direct_cesaro(p, t) == doctest::Approx(brute).epsilon(1e-13));
}

TEST_CASE("direct_cesaro: nondecreasing in N") {
    const SieveTable t = build_lambda_table(1000);
    for (int ell : {1, 2}) {
        for (double k : {1.5, 2.5}) {
            double prev = -1.0;
            for (std::uint64_t N : {50ull, 100ull, 200ull, 400ull, 800ull}) {
                CesaroParams p{ell, k, N};
                const double v = direct_cesaro(p, t);
                CHECK(v >= prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("params: validation and warning band") {
    CHECK_THROWS_AS((CesaroParams{0, 2.0, 100}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((CesaroParams{1, 2.0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((CesaroParams{1, 0.4, 100}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((CesaroParams{1, 0.9, 100}.validate(true)), std::invalid_argument);
    CHECK_NOTHROW((CesaroParams{1, 0.9, 100}.validate(false)));
    CHECK((CesaroParams{1, 0.9, 100}.warning_mode()));
    CHECK_NOTHROW((CesaroParams{3, 2.5, 100}.validate(true)));
    CHECK_FALSE((CesaroParams{3, 2.5, 100}.warning_mode()));
}

// ---------------------------------------------- generating-function check ----

TEST_CASE("exp-sum identity: algebraic residual vanishes") {
    const SieveTable t = build_lambda_table(10000);
    const ExpSumCheck c1 = exp_sum_identity_check(0.1, 1, 10000, t);
    CHECK(c1.residual < 1e-10);
    CHECK(c1.cutoff_ok);

    const ExpSumCheck c3 = exp_sum_identity_check(1.0, 3, 100, t);
    CHECK(c3.residual < 1e-12);
    CHECK(c3.cutoff_ok);
}

TEST_CASE("exp-sum identity: relative residual stays tiny for a >= 0.1") {
    const SieveTable t = build_lambda_table(10000);
    for (double a : {0.1, 0.25, 0.5, 1.0}) {
        const ExpSumCheck c = exp_sum_identity_check(a, 2, 5000, t);
        CHECK(c.residual <= 1e-10 * std::max(1.0, std::fabs(c.rhs)));
    }
}

TEST_CASE("exp-sum identity: undersized cutoff is flagged, not hidden") {
    const SieveTable t = build_lambda_table(1000);
    const ExpSumCheck c = exp_sum_identity_check(0.1, 1, 100, t);
    CHECK_FALSE(c.cutoff_ok);  // a * cutoff = 10: truncation visible at double precision
    CHECK_THROWS_AS(exp_sum_identity_check(0.0, 1, 100, t), std::invalid_argument);
    CHECK_THROWS_AS(exp_sum_identity_check(0.1, 0, 100, t), std::invalid_argument);
}

TEST_CASE("exp-sum identity: PNT normalisation approaches 1") {
    const SieveTable t = build_lambda_table(100000);
    const ExpSumCheck c = exp_sum_identity_check(1e-3, 1, 2, t);
    CHECK(std::fabs(c.pnt_ratio - 1.0) < 0.05);

    const ExpSumCheck c2 = exp_sum_identity_check(1e-5, 2, 2, t);
    CHECK(std::fabs(c2.pnt_ratio - 1.0) < 0.05);

    const ExpSumCheck c3 = exp_sum_identity_check(1e-6, 3, 2, t);
    CHECK(std::fabs(c3.pnt_ratio - 1.0) < 0.05);
}
