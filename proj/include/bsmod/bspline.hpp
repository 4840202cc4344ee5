#pragma once

// The kernel chi_h^k: k-fold convolution power of the normalized indicator of
// (-h/2, h/2).  Exact piecewise-polynomial evaluation, Fourier multipliers of
// the periodization, and the second-moment constants c_k(h).

#include "bsmod/piecewise.hpp"

namespace bsmod {

struct BSplineKernel {
    double h;
    int k;

    BSplineKernel(double h_, int k_);

    double support_radius() const { return 0.5 * k * h; }

    /// Exact value of chi_h^k(t); 0 outside the open support, and for k = 1
    /// the open-interval convention gives 0 at |t| = h/2.
    double eval(double t) const;

    /// Fourier multiplier of the periodized kernel: sinc(pi j h)^k.
    double fourier_coeff(long j) const;

    /// c_k(h) = 2 h^2 / (k+2)! * sum_j (-1)^j C(k,j) (k/2 - j)^{k+2}
    ///        = integral of u^2 chi_h^k(u) du over [0, kh/2].
    double second_moment_constant() const;

    /// The kernel as an explicit compact piecewise polynomial (knots at
    /// -kh/2 + j h).
    CompactKernel piecewise() const;
};

/// sin(x)/x with a series branch near 0.
double sinc(double x);

/// Convenience free functions matching the operation names.
inline double kernel_eval(const BSplineKernel& k, double t) { return k.eval(t); }
inline double fourier_coeff(const BSplineKernel& k, long j) { return k.fourier_coeff(j); }
inline double second_moment_constant(const BSplineKernel& k) { return k.second_moment_constant(); }

} // namespace bsmod
