#pragma once

// The sharpness construction: square wave, its smoothed layers
// eps_j = (sign cos 2 pi n .) * chi_h^j with h = 1/(2n), and partial sums of
// phi = sum_j eps_j with geometric tail bookkeeping.

#include "bsmod/periodic.hpp"

namespace bsmod {

/// eps_j; j = 0 is the square wave itself, j >= 1 an exact piecewise
/// polynomial obtained by iterated convolution with chi_h.
PeriodicFunction epsilon_j(int n, int j);

struct PhiPartialSum {
    int n = 1;
    int m = 0;
    PeriodicFunction function;  // sum_{j=0}^m eps_j
    double tail_bound = 0.0;    // (2/pi)^m / (1 - 2/pi)
};

PhiPartialSum phi_partial(int n, int m);

} // namespace bsmod
