#pragma once
#include <cmath>

namespace cesaro {

// Neumaier-compensated accumulator.  Given a fixed visit order the result is
// bit-reproducible and the rounding error stays O(eps) in the term count.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace cesaro
