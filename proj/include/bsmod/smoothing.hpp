#pragma once

// Convolution against chi_h^k and the explicit smoothing constructions
// g, g1, g2 used by the K-functional certificates.

#include "bsmod/bspline.hpp"
#include "bsmod/periodic.hpp"

#include <utility>

namespace bsmod {

/// f * chi_h^k.  TrigPoly input stays TrigPoly (Fourier multiplier, exact);
/// piecewise input stays piecewise (exact kernel convolution); closures are
/// convolved by adaptive quadrature.
PeriodicFunction convolve(const PeriodicFunction& f, const BSplineKernel& kernel);

/// g(t) = 12/h^2 * integral_0^h (f * chi_u^2)(t) u^2 chi_h^2(u) du.
/// For piecewise f this equals convolution with the exact compact kernel
/// (2/h)(1 - |v|/h)^3 on [-h, h]; for trig f the multiplier integral is done
/// coefficientwise by adaptive Gauss-Legendre.
PeriodicFunction construction_g(const PeriodicFunction& f, double h);

/// g1 uses f * chi_u, g2 uses f * chi_u^2, both averaged against
/// (24/h^2) u^2 chi_h(u) on [0, h/2].
std::pair<PeriodicFunction, PeriodicFunction> construction_g1_g2(const PeriodicFunction& f, double h);

/// Exact compact kernels equivalent to the three constructions.
CompactKernel construction_g_kernel(double h);   // (2/h)(1-|v|/h)^3 on [-h,h]
CompactKernel construction_g1_kernel(double h);  // (3/h)(1-(4v/h)^2) on [-h/4,h/4]
CompactKernel construction_g2_kernel(double h);  // (12/h^3)(h/2-|v|)^2 on [-h/2,h/2]

} // namespace bsmod
