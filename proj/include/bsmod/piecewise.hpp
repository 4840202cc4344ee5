#pragma once

// Exact periodic piecewise polynomials on [0,1) and compactly supported
// piecewise polynomial kernels.  Convolution of the two is exact (iterated
// antiderivatives, no quadrature); this is what makes the sharpness
// computations certifiable.

#include "bsmod/certified.hpp"
#include "bsmod/poly.hpp"

#include <optional>
#include <vector>

namespace bsmod {

/// Non-periodic piecewise polynomial with compact support [knots.front(), knots.back()].
/// coef[i] is in local coordinates x = v - knots[i] on [knots[i], knots[i+1]).
struct CompactKernel {
    std::vector<double> knots;
    std::vector<poly::Coeffs> coef;
    int continuity = -1;

    double support_lo() const { return knots.front(); }
    double support_hi() const { return knots.back(); }
    double eval(double v) const;
    /// r-th derivative of the piece polynomial, one-sided from inside piece i.
    double piece_deriv_at(std::size_t i, int r, double v) const;
    double mass() const;
    /// integral of v^2 K(v) over [0, support_hi]
    double half_second_moment() const;
    /// mass of |K| beyond distance d from the origin, one side: integral over [d, support_hi]
    double tail_mass(double d) const;
};

struct Jump {
    double t;
    double size; // right limit minus left limit
};

class PiecewisePoly {
public:
    PiecewisePoly() = default;

    /// bp must be sorted, bp.front() == 0, all in [0,1); coef[i] local at bp[i].
    PiecewisePoly(std::vector<double> bp, std::vector<poly::Coeffs> coef, int continuity);

    static PiecewisePoly constant(double c);
    /// Periodization sum_m K(t + m).
    static PiecewisePoly periodize(const CompactKernel& K);
    /// The square wave sign cos(2*pi*n*t).
    static PiecewisePoly square_wave(int n);

    double eval(double t) const;              // right-continuous convention
    double eval_left(double t) const;         // limit from the left
    std::size_t piece_count() const { return coef_.size(); }
    int continuity() const { return continuity_; }
    const std::vector<double>& breakpoints() const { return bp_; }
    const std::vector<poly::Coeffs>& pieces() const { return coef_; }
    int max_degree() const;

    PiecewisePoly operator+(const PiecewisePoly& o) const;
    PiecewisePoly operator-(const PiecewisePoly& o) const;
    PiecewisePoly scaled(double c) const;
    /// g(t) = f(t - s)
    PiecewisePoly shifted(double s) const;
    /// Exact derivative of given order; requires continuity() >= order - 1.
    PiecewisePoly derivative(int order = 1) const;

    double mean() const;
    /// Certified sup of |f| over the period (one-sided limits included).
    CertifiedValue sup_norm() const;
    /// Certified sup of |f| over the arc [a, b] (b may exceed 1 to wrap).
    CertifiedValue sup_on(double a, double b) const;
    /// Upper bound for |f'| away from jump points (max over pieces).
    double lipschitz_bound() const;

    /// Breakpoint discontinuities larger than tol (absolute).
    std::vector<Jump> jumps(double tol = 1e-9) const;

    /// f(t + u) - 2 f(t) + f(t - u), exact.
    PiecewisePoly second_difference(double u) const;

private:
    std::vector<double> bp_;                // bp_[0] == 0
    std::vector<poly::Coeffs> coef_;        // local at bp_[i]
    int continuity_ = -1;

    std::size_t piece_index(double t) const; // t in [0,1)
    friend PiecewisePoly convolve_compact(const PiecewisePoly&, const CompactKernel&);
};

/// Exact convolution (f * K)(t) = integral f(t - v) K(v) dv of a periodic
/// piecewise polynomial with a compact piecewise polynomial kernel.
PiecewisePoly convolve_compact(const PiecewisePoly& f, const CompactKernel& K);

/// Pointwise convolution value at a single t (same integral, evaluated
/// directly); used for spot checks and the restricted-region machinery.
double convolve_compact_at(const PiecewisePoly& f, const CompactKernel& K, double t);

} // namespace bsmod
