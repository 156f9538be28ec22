#pragma once
#include <cstdint>
#include <vector>

// Arithmetic side: von Mangoldt sieve, representation counts
// r(n) = sum of Lambda(m1) over m1^ell + m2^2 = n (m1, m2 >= 1),
// and the Cesaro-weighted direct sum  sum_{n<=N} r(n) (1-n/N)^k / Gamma(k+1).

namespace cesaro {

struct SieveTable {
    std::uint64_t limit = 0;
    std::vector<double> lambda;  // lambda[m] = Lambda(m), index 0 unused

    // Chebyshev psi(x) = sum_{m<=x} Lambda(m); O(x), intended for checks.
    double psi(std::uint64_t x) const;
};

// Eratosthenes-style sieve; log p computed once per prime so every power of p
// carries a bit-identical Lambda value.  Throws std::invalid_argument on limit=0.
SieveTable build_lambda_table(std::uint64_t limit);

struct CesaroParams {
    int ell = 1;              // exponent of the prime-power part, >= 1
    double k = 2.5;           // Cesaro weight order
    std::uint64_t n_cap = 2;  // the N of the weighted sum

    // strict mode enforces k > 1; otherwise k > 1/2 is accepted in warning mode
    void validate(bool strict = false) const;
    bool warning_mode() const { return k <= 1.0; }
};

// Floor of m^(1/ell) made exact by re-exponentiation in {r-1, r, r+1}.
std::uint64_t iroot(std::uint64_t m, int ell);

// Returns root with root^ell == m, or 0 if m is not a perfect ell-th power.
std::uint64_t exact_root(std::uint64_t m, int ell);

// r(n): iterate m2 while m2^2 < n and test n - m2^2 for a perfect ell-th power.
// Requires the table to cover every candidate m1 <= (n-1)^(1/ell).
double rep_count(std::uint64_t n, int ell, const SieveTable& table);

// r(n) for all n <= N at once via pair enumeration (same values as rep_count,
// cheaper than N individual root extractions).
std::vector<double> rep_count_all(std::uint64_t N, int ell, const SieveTable& table);

// Direct weighted sum, accumulated ascending in n with compensated summation.
// The n = N term has weight exactly 0.
double direct_cesaro(const CesaroParams& params, const SieveTable& table);

struct ExpSumCheck {
    double lhs = 0.0;        // sum_{n<=cutoff} r(n) e^{-na}
    double rhs = 0.0;        // S_ell(a) * omega2(a), truncated series
    double residual = 0.0;   // |lhs - rhs|
    double pnt_ratio = 0.0;  // S_ell(a) * ell * a^{1/ell} / Gamma(1/ell)
    bool cutoff_ok = true;   // false when e^{-a*cutoff} is not below precision
};

// Checks the generating-function identity S_ell(a) * omega2(a) = sum r(n) e^{-na}
// with both sides built from the same table, plus the PNT normalisation ratio.
ExpSumCheck exp_sum_identity_check(double a, int ell, std::uint64_t cutoff,
                                   const SieveTable& table);

}  // namespace cesaro
