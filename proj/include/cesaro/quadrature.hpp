#pragma once
#include <vector>

namespace cesaro {

// Gauss-Legendre rule on [-1, 1].  Nodes ascending; exact for degree 2n-1.
struct GLRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Cached rule for the given node count (Newton iteration on P_n, deterministic).
const GLRule& gl_rule(int n);

}  // namespace cesaro
