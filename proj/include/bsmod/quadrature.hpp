#pragma once

// Adaptive Gauss-Legendre quadrature for smooth 1-D integrands.

#include "bsmod/certified.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace bsmod::quad {

/// 15-point Gauss-Legendre on [-1, 1].
inline const std::array<double, 15>& gl_nodes() {
    static const std::array<double, 15> n = {
        -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
        -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
        0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
        0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
    return n;
}

inline const std::array<double, 15>& gl_weights() {
    static const std::array<double, 15> w = {
        0.03075324199611727, 0.07036604748810812, 0.10715922046717194, 0.13957067792615432,
        0.16626920581699392, 0.18616100001556221, 0.19843148532711158, 0.20257824192556127,
        0.19843148532711158, 0.18616100001556221, 0.16626920581699392, 0.13957067792615432,
        0.10715922046717194, 0.07036604748810812, 0.03075324199611727};
    return w;
}

inline double gl15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += gl_weights()[i] * f(c + hw * gl_nodes()[i]);
    return s * hw;
}

/// Adaptive bisection on the 15/two-halves difference; abs_tol is the target
/// absolute error of the whole integral.
inline double adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
                       int max_depth = 28) {
    struct Rec {
        double a, b, whole;
        int depth;
    };
    double total = 0.0;
    std::function<double(double, double, double, int)> go = [&](double x, double y, double whole, int depth) -> double {
        double m = 0.5 * (x + y);
        double l = gl15(f, x, m), r = gl15(f, m, y);
        if (depth >= max_depth) return l + r;
        double err = std::abs(l + r - whole);
        if (err < abs_tol * std::max(1.0, (y - x) / (b - a)) * 0.5) return l + r;
        return go(x, m, l, depth + 1) + go(m, y, r, depth + 1);
    };
    if (!(b > a)) return 0.0;
    total = go(a, b, gl15(f, a, b), 0);
    return total;
}

} // namespace bsmod::quad
