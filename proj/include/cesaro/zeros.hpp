#pragma once
#include <cstddef>
#include <string>
#include <vector>

// Non-trivial zeta-zero ordinates: file ingestion with format and density
// validation, plus truncation-tail estimates for every sum over zeros that the
// analytic terms carry (the series over rho are infinite; evaluation cuts them
// at gamma <= T and reports how much mass the cut can hide).

namespace cesaro {

struct ZeroSet {
    std::vector<double> gammas;  // strictly ascending ordinates, all > 14
    double beta = 0.5;           // every tabulated zero lies on the critical line
    std::string source;          // provenance (path it was loaded from)
    double height = 0.0;         // max gamma, 0 for an empty set

    std::size_t count_below(double T) const;  // #{gamma <= T}
};

// Riemann-von Mangoldt main term N(T) ~ (T/2pi) log(T/2pi) - T/2pi + 7/8.
double riemann_von_mangoldt(double T);

// Parses a plain-text table: one ordinate per line, ASCII decimal, ascending,
// '#' comments and blank lines allowed.  Keeps at most max_count ordinates.
// Validates strict ascent, gamma > 14, and |count(gamma <= T) - N(T)| <= 1 at
// every checkpoint T in {100, 1000, height} that the table reaches.  Throws
// std::runtime_error naming the offending line on parse, order, or density
// failure.  max_count = 0 yields an empty, valid (but unusable) set.
ZeroSet load_zeros(const std::string& path,
                   std::size_t max_count = static_cast<std::size_t>(-1));

// Bundled table path, overridable through the CESARO_ZEROS environment variable.
std::string default_zeros_path();

enum class M23Variant { m2, m3 };

// Upper estimate (safety factor 4) for the absolute tail sum_{gamma > T} of the
// M2 / M3 zero series at weight k, exponent ell, and cut N:
//   const * N^{1/(2 ell) + 1/2} * (1/2pi) int_T^infty t^p log(t/2pi) dt,
// p = 1/(2 ell) - k - 3/2 for M2 (M3: 1/(2 ell) - k - 1, and no N^{1/2}).
// The integrand combines the Stirling ratio |Gamma(rho/ell)/Gamma(k+c+rho/ell)|
// ~ (gamma/ell)^{-k-c} with the zero density (1/2pi) log(gamma/2pi).
// Requires T >= 50 and a convergent integral: k > 1/(2 ell) - 1/2 for M2,
// k > 1/(2 ell) for M3; throws std::invalid_argument otherwise.
double tail_bound_m2m3(double T, double k, int ell, double n_cap, M23Variant variant);

// Upper estimate (safety factor 4) for the M6 tail: per-zero decay
// gamma^{-(1+eps)}, eps = (k-1)/2, with the density log factor:
//   const * N^{1/4 - k/2 + 1/(2 ell)} * (1/2pi) int_T^infty t^{-1-eps} log t dt.
// Requires k > 1 (the development's own hypothesis) and T >= 50.
double tail_bound_m6(double T, double k, int ell, double n_cap);

// eps = (k-1)/2 <= 0.05: the M6 tail decays so slowly in T that the bound stays
// large at every reachable height; callers should surface that.
bool m6_slow_regime(double k);

}  // namespace cesaro
