#include "bsmod/extremal.hpp"

#include "bsmod/bspline.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bsmod {

PeriodicFunction epsilon_j(int n, int j) {
    if (n < 1 || j < 0) throw std::invalid_argument("epsilon_j: n >= 1, j >= 0 required");
    if (j == 0) return PeriodicFunction::square_wave(n);
    double h = 1.0 / (2.0 * n);
    CompactKernel box = BSplineKernel(h, 1).piecewise();
    PiecewisePoly cur = PiecewisePoly::square_wave(n);
    for (int i = 0; i < j; ++i) cur = convolve_compact(cur, box);
    return PeriodicFunction::from_piecewise(std::move(cur));
}

PhiPartialSum phi_partial(int n, int m) {
    if (n < 1 || m < 0) throw std::invalid_argument("phi_partial: n >= 1, m >= 0 required");
    PhiPartialSum P;
    P.n = n;
    P.m = m;
    double h = 1.0 / (2.0 * n);
    CompactKernel box = BSplineKernel(h, 1).piecewise();
    PiecewisePoly layer = PiecewisePoly::square_wave(n);
    PiecewisePoly acc = layer;
    for (int j = 1; j <= m; ++j) {
        layer = convolve_compact(layer, box);
        acc = acc + layer;
    }
    P.function = PeriodicFunction::from_piecewise(std::move(acc));
    const double q = 2.0 / std::numbers::pi;
    P.tail_bound = std::pow(q, m) / (1.0 - q);
    return P;
}

} // namespace bsmod
