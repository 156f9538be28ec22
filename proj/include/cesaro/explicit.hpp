#pragma once
#include <array>

#include "cesaro/arith.hpp"
#include "cesaro/zeros.hpp"

// The seven analytic terms M1..M7 of the weighted-count development, on the
// normalized scale: sum_{n<=N} r(n) (1-n/N)^k / Gamma(k+1) = M1+...+M7 + O(1).
//
//   M1 = sqrt(pi) (G(1/l)/2l) N^{1/2+1/l} / G(k+3/2+1/l)
//        - (G(1/l)/2l) N^{1/l} / G(k+1+1/l)
//   M2 = -(sqrt(pi)/2l) sum_rho G(rho/l)/G(k+3/2+rho/l) N^{rho/l+1/2}
//   M3 =  (1/2l)        sum_rho G(rho/l)/G(k+1+rho/l)   N^{rho/l}
//   M4 = -(sqrt(pi) log(2pi) / (2 G(k+3/2))) N^{1/2}
//   M5 =  (N^{1/4-k/2+1/(2l)}/pi^{k+1/l}) (G(1/l)/l)
//            sum_j J_{k+1/2+1/l}(2 pi j sqrt N) / j^{k+1/2+1/l}
//   M6 = -(N^{1/4-k/2}/pi^k) sum_rho G(rho/l) (sqrt N/pi)^{rho/l}
//            sum_j J_{k+1/2+rho/l}(2 pi j sqrt N) / j^{k+1/2+rho/l}
//   M7 = -(log(2pi)/pi^k) N^{1/4-k/2} sum_j J_{k+1/2}(2 pi j sqrt N) / j^{k+1/2}
//
// (G = Gamma, rho = 1/2 + i gamma over positive ordinates, conjugates paired as
// 2 re.  The development's constant piece at weight level k belongs to the O(1)
// remainder, not to M4.)  Zero sums run over gamma <= T, Bessel sums over
// j <= jmax; every cut is accompanied by a truncation-tail estimate.

namespace cesaro {

struct TruncationConfig {
    double zero_height_T = 0.0;      // cutoff on gamma for M2, M3, M6
    int bessel_jmax = 200;           // cutoff on j for M5, M6, M7
    double target_tolerance = 1e-10; // per-zero skip budget for the M6 inner
                                     // sums; skipped mass is added to the tail
    bool debug_reverse_zero_order = false;  // reverse the zero and j reduction
                                            // orders (determinism probe)
    bool debug_j_outer = false;             // M6 with the two sums interchanged

    // zero_height_T in [50, zeros.height], bessel_jmax >= 1, tolerance > 0.
    void validate(const ZeroSet& zeros) const;
};

// One truncated term: real value, nonnegative tail estimate, and the magnitude
// of the imaginary residue left by explicit conjugate pairing (a measure of the
// evaluators' conjugation symmetry; ~0 when every factor mirrors exactly).
struct TermValue {
    double value = 0.0;
    double tail = 0.0;
    double imag_leakage = 0.0;
};

struct TermBreakdown {
    std::array<double, 7> m{};             // M1..M7, normalized scale
    std::array<double, 7> tails{};         // truncation estimates; [0]=[3]=0
    std::array<double, 7> imag_leakage{};  // pairing residue magnitudes
};

struct PhaseTimings {
    double direct_s = 0;  // sieve-backed weighted sum
    double closed_s = 0;  // M1, M4
    double zero_s = 0;    // M2, M3
    double bessel_s = 0;  // M5, M7
    double m6_s = 0;      // M6 double sum
};

struct EvalReport {
    CesaroParams params;
    double direct = 0.0;
    TermBreakdown terms;
    double explicit_sum = 0.0;  // sum of the seven terms
    double residual = 0.0;      // direct - explicit_sum
    double total_tail = 0.0;    // sum of the tail estimates
    bool m6_tail_unreliable = false;  // k <= 1: the M6 tail theory needs k > 1
    PhaseTimings timings;
};

// Closed forms; no truncation.
double eval_m1(const CesaroParams& params);
double eval_m4(const CesaroParams& params);

// Zero sums, ascending gamma <= T with compensated summation, each zero
// contributing 2 re(term at rho); log-space assembly of Gamma ratios and N
// powers.  Preconditions: k > -1/2 (M2), k > 0 (M3); T within the loaded
// height.  Empty ZeroSet: value 0 with a full-series bound.
TermValue eval_m2(const CesaroParams& params, const ZeroSet& zeros,
                  const TruncationConfig& trunc);
TermValue eval_m3(const CesaroParams& params, const ZeroSet& zeros,
                  const TruncationConfig& trunc);

// Real-order Bessel sums, ascending j.  Preconditions: k > 1/2 - 1/l (M5),
// k > 1/2 (M7).  jmax = 0: value 0 with a full-series bound.
TermValue eval_m5(const CesaroParams& params, const TruncationConfig& trunc);
TermValue eval_m7(const CesaroParams& params, const TruncationConfig& trunc);

// Complex-order double sum, zero-outer / j-inner (j-outer behind the debug
// flag).  Gamma(rho/l) decays like e^{-pi gamma/(2l)} while the Bessel factor
// grows like e^{+pi gamma/(2l)}; the two logs are fused before the single
// exponentiation, so no intermediate can overflow (asserted).  Negligible
// (zero, j) blocks are skipped by a saddle-magnitude envelope estimate; the
// skipped mass is accumulated and reported inside the tail.  Precondition:
// k > 1 (the development's own hypothesis).
TermValue eval_m6(const CesaroParams& params, const ZeroSet& zeros,
                  const TruncationConfig& trunc);

// Direct sum plus all seven terms.  For k in (1/2, 1] (warning mode) the M6
// value is still reported but its zero-cut tail estimate is not defined; the
// report flags it, and the M6 tail then carries only the explicitly skipped
// inner-sum mass.
EvalReport evaluate(const CesaroParams& params, const ZeroSet& zeros,
                    const TruncationConfig& trunc, const SieveTable& table);

}  // namespace cesaro
