#include "cesaro/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#ifndef CESARO_BUNDLED_ZEROS
#define CESARO_BUNDLED_ZEROS ""
#endif

namespace cesaro {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}

std::size_t ZeroSet::count_below(double T) const {
    return static_cast<std::size_t>(
        std::upper_bound(gammas.begin(), gammas.end(), T) - gammas.begin());
}

double riemann_von_mangoldt(double T) {
    const double x = T / kTwoPi;
    return x * std::log(x) - x + 7.0 / 8.0;
}

ZeroSet load_zeros(const std::string& path, std::size_t max_count) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_zeros: cannot open " + path);

    ZeroSet zs;
    zs.source = path;
    std::string line;
    std::size_t lineno = 0;
    while (zs.gammas.size() < max_count && std::getline(in, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        const char* begin = line.c_str() + pos;
        char* end = nullptr;
        double g = std::strtod(begin, &end);
        if (end == begin)
            throw std::runtime_error("load_zeros: parse failure at line " +
                                     std::to_string(lineno) + " of " + path);
        while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
        if (*end != '\0')
            throw std::runtime_error("load_zeros: trailing garbage at line " +
                                     std::to_string(lineno) + " of " + path);
        if (!(g > 14.0))
            throw std::runtime_error("load_zeros: ordinate <= 14 at line " +
                                     std::to_string(lineno) + " (first zero is ~14.13)");
        if (!zs.gammas.empty() && !(g > zs.gammas.back()))
            throw std::runtime_error("load_zeros: not strictly ascending at line " +
                                     std::to_string(lineno) + " of " + path);
        zs.gammas.push_back(g);
    }
    if (zs.gammas.empty()) {
        zs.source += " (empty)";
        return zs;
    }
    zs.height = zs.gammas.back();

    // Density sanity at every checkpoint the table reaches; a truncated prefix
    // is still a complete count below its own height.
    for (double T : {100.0, 1000.0, zs.height}) {
        if (T > zs.height) continue;
        const double est = riemann_von_mangoldt(T);
        const double got = static_cast<double>(zs.count_below(T));
        if (std::abs(got - est) > 1.0)
            throw std::runtime_error(
                "load_zeros: density check failed at T = " + std::to_string(T) +
                ": counted " + std::to_string(static_cast<std::size_t>(got)) +
                ", Riemann-von Mangoldt expects " + std::to_string(est));
    }
    return zs;
}

std::string default_zeros_path() {
    if (const char* env = std::getenv("CESARO_ZEROS")) return env;
    return CESARO_BUNDLED_ZEROS;
}

double tail_bound_m2m3(double T, double k, int ell, double n_cap, M23Variant variant) {
    if (!(T >= 50.0)) throw std::invalid_argument("tail_bound_m2m3: requires T >= 50");
    if (ell < 1) throw std::invalid_argument("tail_bound_m2m3: requires ell >= 1");
    if (!(n_cap >= 1.0)) throw std::invalid_argument("tail_bound_m2m3: requires N >= 1");
    const double half_ell = 0.5 / ell;
    const double c = variant == M23Variant::m2 ? 1.5 : 1.0;
    const double p = half_ell - k - c;  // integrand exponent
    const double q = -(p + 1.0);        // convergence requires q > 0
    if (!(q > 0.0))
        throw std::invalid_argument(
            "tail_bound_m2m3: divergent tail, needs k > " + std::to_string(half_ell + c - 1.0));
    // int_T^infty t^p log(t/2pi) dt = T^{p+1} (log(T/2pi)/q + 1/q^2)
    const double integral = std::pow(T, p + 1.0) * (std::log(T / kTwoPi) / q + 1.0 / (q * q));
    const double pref = variant == M23Variant::m2
                            ? std::sqrt(kPi) / (2.0 * ell) * std::pow(ell, k + c)
                            : 1.0 / (2.0 * ell) * std::pow(ell, k + c);
    const double n_exp = variant == M23Variant::m2 ? half_ell + 0.5 : half_ell;
    return 4.0 * pref * std::pow(n_cap, n_exp) * integral / kTwoPi;
}

double tail_bound_m6(double T, double k, int ell, double n_cap) {
    if (!(k > 1.0))
        throw std::invalid_argument("tail_bound_m6: requires k > 1 (development hypothesis)");
    if (!(T >= 50.0)) throw std::invalid_argument("tail_bound_m6: requires T >= 50");
    if (ell < 1) throw std::invalid_argument("tail_bound_m6: requires ell >= 1");
    if (!(n_cap >= 1.0)) throw std::invalid_argument("tail_bound_m6: requires N >= 1");
    const double eps = (k - 1.0) / 2.0;
    // int_T^infty t^{-1-eps} log t dt = T^{-eps} (log T / eps + 1/eps^2)
    const double integral = std::pow(T, -eps) * (std::log(T) / eps + 1.0 / (eps * eps));
    const double n_exp = 0.25 - k / 2.0 + 0.5 / ell;
    return 4.0 * std::pow(n_cap, n_exp) * integral / kTwoPi;
}

bool m6_slow_regime(double k) { return (k - 1.0) / 2.0 <= 0.05; }

}  // namespace cesaro
