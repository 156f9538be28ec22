#pragma once
#include <complex>

#include "cesaro/specfun.hpp"

namespace cesaro {

// ---------------------------------------------------------------------------
// Bessel J of complex order nu and real argument u > 0.
//
// Three public evaluation modes with overlapping validity windows in u so
// neighbouring modes can be cross-checked against each other:
//
//   series              ascending power series, stable for u <= max(10, |nu|)
//                       (beyond that the alternating terms cancel catastrophically);
//   poisson_quadrature  (2 (u/2)^nu / (sqrt(pi) Gamma(nu+1/2))) *
//                       int_0^1 (1-t^2)^{nu-1/2} cos(ut) dt, panelled
//                       Gauss-Legendre with >= 10 nodes per oscillation and
//                       geometric grading of the t -> 1 endpoint; requires
//                       re(nu) > -1/2;
//   asymptotic          sqrt(2/(pi u)) (P cos w - Q sin w), w = u - nu pi/2 - pi/4,
//                       the large-argument expansion whose leading term is
//                       cos w; the P/Q correction series is summed adaptively
//                       to its smallest term, so the window threshold
//                       u >= 1e3 (1 + |im nu|) keeps the truncation error far
//                       below the 1e-3 cross-check tolerance.
// ---------------------------------------------------------------------------

enum class BesselMode { series, poisson_quadrature, asymptotic };

// One mode together with its validity window [switch_lo, switch_hi] in u.
struct BesselRegime {
    BesselMode mode;
    double switch_lo;
    double switch_hi;
};

BesselRegime series_regime(cplx nu);      // [0, max(10, |nu|)]
BesselRegime poisson_regime(cplx nu);     // [5, 2e3 (1 + |im nu|)]
BesselRegime asymptotic_regime(cplx nu);  // [1e3 (1 + |im nu|), inf)

// Mode whose window contains u: series below, asymptotic above, Poisson between.
BesselRegime select_regime(cplx nu, double u);

// J_nu(u) in the given mode.  Throws std::invalid_argument on precondition
// violations (u <= 0; Poisson with re(nu) <= -1/2) and std::runtime_error when
// the quadrature cannot reach tolerance (message carries the achieved value).
// Overflows for |im nu| beyond ~440 where |J| ~ e^{pi |im nu|/2}; use
// log_bessel_j there.
cplx bessel_j(cplx nu, double u, const BesselRegime& regime);
cplx bessel_j(cplx nu, double u);  // auto-selected regime

// log J_nu(u), principal value up to a 2 pi i ambiguity, stable for large
// |im nu| where J itself over/underflows.  Routing: Hankel P/Q expansion with
// the two cos-exponentials split and the dominant one fused into the log when
// the first correction term is small; power series in scaled form for small u;
// otherwise saddle-point quadrature of the Sonine integrand (|im nu| >= 5) or
// the Poisson integral in log form (nearly real order).
cplx log_bessel_j(cplx nu, double u);

// Leading-order estimate of log |J_nu(u)| from the dominant saddle of the
// Sonine integrand, O(1)-accurate away from zeros of J.  Cheap (no path
// following); used to decide which terms of a long sum are negligible before
// paying for a full evaluation.
double log_bessel_mag_estimate(cplx nu, double u);

// Sonine contour representation
//   J_nu(u) = (u/2)^nu (1/(2 pi i)) int e^{s - u^2/(4s)} s^{-nu-1} ds
// quadratured along re(s) = 1 truncated at |im s| = t_max, against the
// production evaluator.  A test identity, not a production path; requires
// re(nu) > 0 so the truncated tail decays.
struct SonineCheck {
    cplx contour_value;
    cplx direct_value;
    double residual;       // |contour_value - direct_value|
    double tail_estimate;  // bound on the neglected |im s| > t_max contribution
};
SonineCheck sonine_contour_check(cplx nu, double u, double t_max);

}  // namespace cesaro
