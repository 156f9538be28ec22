#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cesaro/arith.hpp"
#include "cesaro/bessel.hpp"
#include "cesaro/explicit.hpp"
#include "cesaro/kahan.hpp"
#include "cesaro/zeros.hpp"
#include "first_ordinates.hpp"

using namespace cesaro;

namespace {

double crel(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

CesaroParams make_params(int ell, double k, std::uint64_t n) {
    CesaroParams p;
    p.ell = ell;
    p.k = k;
    p.n_cap = n;
    return p;
}

// gamma_1 alone; height below 50, so the ops fall back to full-series tails
ZeroSet first_zero_only() {
    ZeroSet zs;
    zs.gammas = {kFirst60[0]};
    zs.height = kFirst60[0];
    zs.source = "fixture: gamma_1";
    return zs;
}

ZeroSet sixty_zeros() {
    ZeroSet zs;
    zs.gammas = kFirst60;
    zs.height = kFirst60.back();
    zs.source = "fixture: first 60";
    return zs;
}

TruncationConfig trunc_at(double T, int jmax) {
    TruncationConfig t;
    t.zero_height_T = T;
    t.bessel_jmax = jmax;
    return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// closed forms M1, M4
// ---------------------------------------------------------------------------

TEST_CASE("eval_m1 matches the frozen value and its own Gamma assembly") {
    // ell=1, k=2, N=1e6: both Gamma factors are rational; value frozen from an
    // independent high-precision evaluation
    CHECK(crel(eval_m1(make_params(1, 2.0, 1000000)), 76107142.857142857143) < 1e-13);

    // same closed form assembled in the test, irrational parameters
    const double k = 2.5, il = 1.0 / 3.0, N = 1000.0;
    const double g13 = std::tgamma(il) / 6.0;
    const double expect = std::sqrt(3.14159265358979323846) * g13 *
                              std::pow(N, 0.5 + il) / std::tgamma(k + 1.5 + il) -
                          g13 * std::pow(N, il) / std::tgamma(k + 1.0 + il);
    CHECK(crel(eval_m1(make_params(3, k, 1000)), expect) < 1e-14);
}

TEST_CASE("eval_m1 is positive and scales like N^{1/2 + 1/ell}") {
    for (int ell : {1, 2, 3}) {
        for (double k : {1.1, 2.5}) {
            CHECK(eval_m1(make_params(ell, k, 100)) > 0.0);
            const double lo = eval_m1(make_params(ell, k, 100000000));
            const double hi = eval_m1(make_params(ell, k, 400000000));
            const double slope = std::log(hi / lo) / std::log(4.0);
            CHECK(std::abs(slope - (0.5 + 1.0 / ell)) < 0.02);
        }
    }
}

TEST_CASE("eval_m4 matches the frozen value, scales as sqrt(N), ignores ell") {
    CHECK(crel(eval_m4(make_params(1, 1.0, 10000)), -122.52513776062303224) < 1e-14);
    const double a = eval_m4(make_params(1, 2.5, 10000));
    const double b = eval_m4(make_params(1, 2.5, 40000));
    CHECK(crel(b / a, 2.0) < 1e-13);
    CHECK(eval_m4(make_params(3, 1.7, 5000)) == eval_m4(make_params(1, 1.7, 5000)));
    CHECK(a < 0.0);
}

// ---------------------------------------------------------------------------
// zero sums M2, M3
// ---------------------------------------------------------------------------

TEST_CASE("eval_m2/eval_m3: single-zero values frozen from high precision") {
    // ell=1, k=2, N=1e4, rho = 1/2 + i gamma_1: the conjugate pair contributes
    //   M3 term:  2 re[ (1/2) G(rho)/G(3+rho) N^rho ]
    //   M2 term:  2 re[ -(sqrt(pi)/2) G(rho)/G(3.5+rho) N^{rho+1/2} ]
    const CesaroParams p = make_params(1, 2.0, 10000);
    const ZeroSet one = first_zero_only();
    const TruncationConfig t = trunc_at(one.height, 1);

    const TermValue m3 = eval_m3(p, one, t);
    CHECK(crel(m3.value, 0.034380068685391817064) < 1e-12);
    CHECK(m3.imag_leakage < 1e-12);
    CHECK(m3.tail > 0.0);

    const TermValue m2 = eval_m2(p, one, t);
    CHECK(crel(m2.value, -1.3778389316167222821) < 1e-12);
    CHECK(m2.imag_leakage < 1e-12);
    CHECK(m2.tail > m3.tail);  // the extra N^{1/2} makes the M2 cut heavier
}

TEST_CASE("eval_m2/eval_m3: empty set gives zero value and a finite full bound") {
    const CesaroParams p = make_params(2, 1.5, 4096);
    ZeroSet none;
    none.source = "fixture: empty";
    for (double T : {0.0, 1000.0}) {
        const TermValue m2 = eval_m2(p, none, trunc_at(T, 1));
        const TermValue m3 = eval_m3(p, none, trunc_at(T, 1));
        CHECK(m2.value == 0.0);
        CHECK(m3.value == 0.0);
        CHECK(m2.tail > 0.0);
        CHECK(m3.tail > 0.0);
        CHECK(std::isfinite(m2.tail));
        CHECK(std::isfinite(m3.tail));
    }
    // the full bound dominates any truncated-cut bound at T = 50
    const TermValue full = eval_m3(p, none, trunc_at(0.0, 1));
    CHECK(full.tail > tail_bound_m2m3(50.0, p.k, p.ell, 4096.0, M23Variant::m3));
}

TEST_CASE("eval_m2/eval_m3: reversed zero order changes nothing material") {
    const CesaroParams p = make_params(1, 2.5, 32768);
    const ZeroSet zs = sixty_zeros();
    TruncationConfig fwd = trunc_at(160.0, 1);
    TruncationConfig rev = fwd;
    rev.debug_reverse_zero_order = true;
    CHECK(crel(eval_m2(p, zs, rev).value, eval_m2(p, zs, fwd).value) < 1e-12);
    CHECK(crel(eval_m3(p, zs, rev).value, eval_m3(p, zs, fwd).value) < 1e-12);
}

TEST_CASE("eval_m2/eval_m3: tails shrink as the zero cut grows") {
    const CesaroParams p = make_params(1, 2.5, 32768);
    const ZeroSet zs = sixty_zeros();
    const double t2a = eval_m2(p, zs, trunc_at(60.0, 1)).tail;
    const double t2b = eval_m2(p, zs, trunc_at(160.0, 1)).tail;
    CHECK(t2a > t2b);
    const double t3a = eval_m3(p, zs, trunc_at(60.0, 1)).tail;
    const double t3b = eval_m3(p, zs, trunc_at(160.0, 1)).tail;
    CHECK(t3a > t3b);
    // and the added zeros change the value by less than the released bound
    const double v60 = eval_m3(p, zs, trunc_at(60.0, 1)).value;
    const double v160 = eval_m3(p, zs, trunc_at(160.0, 1)).value;
    CHECK(std::abs(v160 - v60) < t3a);
}

// ---------------------------------------------------------------------------
// real-order Bessel sums M5, M7
// ---------------------------------------------------------------------------

TEST_CASE("eval_m5: frozen two-term value and in-test reassembly") {
    // ell=1, k=1.5, N=100, jmax=2, order k+1/2+1 = 3, u_j = 20 pi j
    const CesaroParams p = make_params(1, 1.5, 100);
    const TermValue m5 = eval_m5(p, trunc_at(0.0, 2));
    CHECK(crel(m5.value, 0.0041248246757275949853) < 1e-11);
    CHECK(m5.imag_leakage < 1e-12);

    // reassemble from the public Bessel evaluator
    const double u1 = 2.0 * 3.14159265358979323846 * 10.0;
    const double pref = 1.0 / std::pow(3.14159265358979323846, 2.5);
    const double nexp = 0.25 - 0.75 + 0.5;
    Kahan acc;
    for (int j = 1; j <= 2; ++j)
        acc.add(bessel_j(cplx(3.0, 0.0), u1 * j).real() / std::pow(double(j), 3.0));
    CHECK(crel(m5.value, pref * std::pow(100.0, nexp) * acc.value()) < 1e-14);
}

TEST_CASE("eval_m5/eval_m7: tail halves like 2^k per jmax doubling; jmax=0") {
    const CesaroParams p = make_params(2, 2.5, 10000);
    const double ta = eval_m5(p, trunc_at(0.0, 10)).tail;
    const double tb = eval_m5(p, trunc_at(0.0, 20)).tail;
    CHECK(crel(ta / tb, std::pow(2.0, 2.5)) < 1e-12);
    const double t7a = eval_m7(p, trunc_at(0.0, 10)).tail;
    const double t7b = eval_m7(p, trunc_at(0.0, 20)).tail;
    CHECK(crel(t7a / t7b, std::pow(2.0, 2.5)) < 1e-12);

    TruncationConfig none = trunc_at(0.0, 1);
    none.bessel_jmax = 0;
    const TermValue empty = eval_m5(p, none);
    CHECK(empty.value == 0.0);
    CHECK(empty.tail > ta);  // full-series bound dominates every cut bound
}

TEST_CASE("eval_m5/eval_m7: reversed j order changes nothing material") {
    const CesaroParams p = make_params(1, 1.5, 4096);
    TruncationConfig fwd = trunc_at(0.0, 60);
    TruncationConfig rev = fwd;
    rev.debug_reverse_zero_order = true;
    const TermValue a5 = eval_m5(p, fwd), b5 = eval_m5(p, rev);
    CHECK(crel(a5.value, b5.value) < 1e-12);
    CHECK(a5.tail == b5.tail);
    const TermValue a7 = eval_m7(p, fwd), b7 = eval_m7(p, rev);
    CHECK(crel(a7.value, b7.value) < 1e-12);
    CHECK(a7.tail == b7.tail);
}

TEST_CASE("eval_m7 carries the negative log(2 pi) prefactor") {
    // jmax=1: sign of the value is the sign of -J_{k+1/2}(2 pi sqrt N)
    const CesaroParams p = make_params(1, 2.5, 10000);
    const TermValue m7 = eval_m7(p, trunc_at(0.0, 1));
    const double J = bessel_j(cplx(3.0, 0.0), 200.0 * 3.14159265358979323846).real();
    CHECK(m7.value * J < 0.0);
}

// ---------------------------------------------------------------------------
// complex-order double sum M6
// ---------------------------------------------------------------------------

TEST_CASE("eval_m6: single zero, single j, frozen end-to-end value") {
    // ell=1, k=2, N=1e4: value = -(N^{-3/4}/pi^2) 2 re[G(rho_1) (100/pi)^{rho_1}
    //                                               J_{2.5+rho_1}(200 pi)]
    const CesaroParams p = make_params(1, 2.0, 10000);
    const ZeroSet one = first_zero_only();
    const TermValue m6 = eval_m6(p, one, trunc_at(one.height, 1));
    CHECK(crel(m6.value, 3.5300343427667951059e-5) < 1e-8);
    CHECK(m6.imag_leakage < 1e-12);
    CHECK(m6.tail > 0.0);
}

TEST_CASE("eval_m6: a coarse skip budget drops the term into the tail") {
    const CesaroParams p = make_params(1, 2.0, 10000);
    const ZeroSet one = first_zero_only();
    TruncationConfig t = trunc_at(one.height, 1);
    t.target_tolerance = 1e-3;  // far above the lone term's size
    const TermValue m6 = eval_m6(p, one, t);
    CHECK(m6.value == 0.0);
    // the skipped mass is accounted for inside the tail, over the full bound
    const double base = eval_m6(p, one, trunc_at(one.height, 1)).tail;
    CHECK(m6.tail > base);
    CHECK(m6.tail - base > 2.0 * 3.53e-5);  // at least the pair it dropped
    CHECK(m6.tail - base < 1e-2);           // and not absurdly above it
}

TEST_CASE("eval_m6: j-outer and reversed-zero orders agree with the default") {
    const CesaroParams p = make_params(1, 2.2, 5000);
    const ZeroSet zs = sixty_zeros();
    const TruncationConfig fwd = trunc_at(160.0, 20);
    TruncationConfig rev = fwd;
    rev.debug_reverse_zero_order = true;
    TruncationConfig jout = fwd;
    jout.debug_j_outer = true;

    const TermValue a = eval_m6(p, zs, fwd);
    const TermValue b = eval_m6(p, zs, rev);
    const TermValue c = eval_m6(p, zs, jout);
    CHECK(crel(b.value, a.value) < 1e-12);
    CHECK(crel(c.value, a.value) < 1e-12);
    CHECK(b.tail == a.tail);  // same zero cuts, same skipped mass
    CHECK(c.tail == a.tail);
    CHECK(a.imag_leakage < 1e-10);
}

TEST_CASE("eval_m6: empty inputs give the full bound; k <= 1 is rejected") {
    const CesaroParams p = make_params(1, 2.0, 4096);
    ZeroSet none;
    const TermValue m6 = eval_m6(p, none, trunc_at(0.0, 10));
    CHECK(m6.value == 0.0);
    CHECK(m6.tail > 0.0);
    CHECK(std::isfinite(m6.tail));

    TruncationConfig nj = trunc_at(kFirst60[0], 1);
    nj.bessel_jmax = 0;
    CHECK(eval_m6(p, first_zero_only(), nj).value == 0.0);

    CHECK_THROWS_AS(eval_m6(make_params(1, 1.0, 4096), first_zero_only(),
                            trunc_at(kFirst60[0], 1)),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// preconditions
// ---------------------------------------------------------------------------

TEST_CASE("term evaluators reject out-of-range weight orders and cuts") {
    const ZeroSet one = first_zero_only();
    const TruncationConfig t = trunc_at(one.height, 1);
    CHECK_THROWS_AS(eval_m2(make_params(1, -0.6, 100), one, t), std::invalid_argument);
    CHECK_THROWS_AS(eval_m3(make_params(1, 0.0, 100), one, t), std::invalid_argument);
    CHECK_THROWS_AS(eval_m5(make_params(1, -0.6, 100), t), std::invalid_argument);
    CHECK_THROWS_AS(eval_m7(make_params(1, 0.4, 100), t), std::invalid_argument);

    // cut above the loaded height, and an unset (zero) cut with zeros present
    CHECK_THROWS_AS(eval_m3(make_params(1, 2.0, 100), one, trunc_at(20.0, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(eval_m3(make_params(1, 2.0, 100), one, trunc_at(0.0, 1)),
                    std::invalid_argument);
}

TEST_CASE("TruncationConfig::validate enforces the production window") {
    const ZeroSet zs = sixty_zeros();
    TruncationConfig t = trunc_at(100.0, 50);
    CHECK_NOTHROW(t.validate(zs));
    CHECK_THROWS_AS(trunc_at(40.0, 50).validate(zs), std::invalid_argument);
    CHECK_THROWS_AS(trunc_at(200.0, 50).validate(zs), std::invalid_argument);
    CHECK_THROWS_AS(trunc_at(100.0, 0).validate(zs), std::invalid_argument);
    TruncationConfig bad_tol = trunc_at(100.0, 50);
    bad_tol.target_tolerance = 0.0;
    CHECK_THROWS_AS(bad_tol.validate(zs), std::invalid_argument);
    // empty set: any T is acceptable (the ops return full bounds)
    ZeroSet none;
    CHECK_NOTHROW(trunc_at(0.0, 50).validate(none));
}

// ---------------------------------------------------------------------------
// assembled report
// ---------------------------------------------------------------------------

TEST_CASE("evaluate: breakdown is consistent and the residual is O(1)-sized") {
    const CesaroParams p = make_params(1, 2.5, 4096);
    const ZeroSet zs = sixty_zeros();
    const TruncationConfig t = trunc_at(160.0, 50);
    const SieveTable table = build_lambda_table(4096);

    const EvalReport rep = evaluate(p, zs, t, table);
    CHECK(rep.direct == direct_cesaro(p, table));
    CHECK(rep.terms.m[0] == eval_m1(p));
    CHECK(rep.terms.m[3] == eval_m4(p));
    CHECK(rep.terms.tails[0] == 0.0);
    CHECK(rep.terms.tails[3] == 0.0);

    Kahan sum, tails;
    for (int i = 0; i < 7; ++i) {
        sum.add(rep.terms.m[i]);
        tails.add(rep.terms.tails[i]);
        CHECK(std::isfinite(rep.terms.m[i]));
        CHECK(rep.terms.tails[i] >= 0.0);
        CHECK(rep.terms.imag_leakage[i] < 1e-8);
    }
    CHECK(rep.explicit_sum == doctest::Approx(sum.value()).epsilon(1e-14));
    CHECK(rep.total_tail == doctest::Approx(tails.value()).epsilon(1e-14));
    CHECK(rep.residual == rep.direct - rep.explicit_sum);
    CHECK(!rep.m6_tail_unreliable);

    // M1 dominates; the residual is bounded-remainder sized, not term sized
    CHECK(std::abs(rep.residual) < 10.0);
    CHECK(std::abs(rep.terms.m[0]) > 1000.0);

    CHECK(rep.timings.direct_s >= 0.0);
    CHECK(rep.timings.m6_s >= 0.0);
}

TEST_CASE("evaluate: k in (1/2, 1] flags the M6 tail as unreliable") {
    const CesaroParams p = make_params(1, 0.8, 1024);
    const ZeroSet zs = sixty_zeros();
    const SieveTable table = build_lambda_table(1024);
    const EvalReport rep = evaluate(p, zs, trunc_at(160.0, 20), table);
    CHECK(rep.m6_tail_unreliable);
    CHECK(std::isfinite(rep.terms.m[5]));
    // only explicitly skipped mass may appear; no closed-form cut bound exists
    CHECK(rep.terms.tails[5] < 1e-6);
    // strict validation would have rejected these parameters
    CHECK_THROWS_AS(p.validate(true), std::invalid_argument);
}

TEST_CASE("evaluate: rejects an unset zero cut when zeros are present") {
    const CesaroParams p = make_params(1, 2.5, 256);
    const SieveTable table = build_lambda_table(256);
    CHECK_THROWS_AS(evaluate(p, sixty_zeros(), TruncationConfig{}, table),
                    std::invalid_argument);
}
