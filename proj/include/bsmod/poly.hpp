#pragma once

// Dense univariate polynomials in monomial form, p(x) = sum c[i] x^i.
// These are the workhorse for the exact piecewise-polynomial carrier; all
// operations are exact up to rounding.

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace bsmod::poly {

using Coeffs = std::vector<double>;

inline double eval(const Coeffs& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

/// Value, first and second derivative at x in one Horner pass.
inline void eval012(const Coeffs& c, double x, double& p, double& dp, double& ddp) {
    p = 0.0; dp = 0.0; ddp = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) {
        ddp = ddp * x + 2.0 * dp;
        dp = dp * x + p;
        p = p * x + c[i];
    }
}

inline Coeffs derivative(const Coeffs& c) {
    if (c.size() <= 1) return {};
    Coeffs d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

/// Antiderivative with constant term 0.
inline Coeffs antiderivative(const Coeffs& c) {
    Coeffs a(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
    return a;
}

inline Coeffs add(const Coeffs& a, const Coeffs& b) {
    Coeffs r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

inline void add_scaled_inplace(Coeffs& a, const Coeffs& b, double s) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
}

inline Coeffs scale(const Coeffs& a, double s) {
    Coeffs r = a;
    for (double& v : r) v *= s;
    return r;
}

/// Taylor shift: q(x) = p(x + d), done by synthetic division (Horner scheme).
inline Coeffs taylor_shift(const Coeffs& c, double d) {
    if (d == 0.0 || c.empty()) return c;
    Coeffs r = c;
    const std::size_t n = r.size();
    for (std::size_t j = 0; j + 1 < n; ++j)
        for (std::size_t i = n - 1; i >= j + 1; --i) r[i - 1] += d * r[i];
    return r;
}

/// Drop numerically-dead leading coefficients.
inline void trim(Coeffs& c, double rel = 0.0) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    while (!c.empty() && std::abs(c.back()) <= rel * m) c.pop_back();
}

/// Upper bound of |p^(3)| on [0, w] given coefficients local to that interval.
inline double third_derivative_bound(const Coeffs& c, double w) {
    double b = 0.0, wp = 1.0;
    for (std::size_t i = 3; i < c.size(); ++i) {
        double k = static_cast<double>(i) * static_cast<double>(i - 1) * static_cast<double>(i - 2);
        b += std::abs(c[i]) * k * wp;
        wp *= w;
    }
    return b;
}

/// Certified max of |p| on [0, w] by branch-and-bound with a quadratic local
/// model plus a cubic tail bound.  Returns {lo, hi} with lo an attained value
/// (endpoint evaluations included, so one-sided limits at breakpoints count).
struct MaxResult { double lo; double hi; };

inline MaxResult abs_max_on(const Coeffs& c, double w, double rel_tol = 1e-13) {
    if (c.empty() || w <= 0.0) return {0.0, 0.0};
    const double B3 = third_derivative_bound(c, w);
    double lo = std::max(std::abs(eval(c, 0.0)), std::abs(eval(c, w)));

    struct Seg {
        double a, b, ub;
        bool operator<(const Seg& o) const { return ub < o.ub; }
    };
    auto seg_bound = [&](double a, double b) {
        double s = 0.5 * (a + b), r = 0.5 * (b - a);
        double p, dp, ddp;
        eval012(c, s, p, dp, ddp);
        return std::abs(p) + r * std::abs(dp) + 0.5 * r * r * std::abs(ddp) + B3 * r * r * r / 6.0;
    };
    std::priority_queue<Seg> pq;
    auto push = [&](double a, double b) {
        double m = 0.5 * (a + b);
        lo = std::max(lo, std::abs(eval(c, m)));
        pq.push({a, b, seg_bound(a, b)});
    };
    int n0 = std::max<int>(2, static_cast<int>(c.size()));
    for (int i = 0; i < n0; ++i) push(w * i / n0, w * (i + 1) / n0);

    double hi = lo;
    for (int iter = 0; iter < 20000 && !pq.empty(); ++iter) {
        Seg s = pq.top();
        pq.pop();
        hi = std::max(lo, s.ub);
        if (s.ub - lo <= rel_tol * (1.0 + std::abs(s.ub))) break;
        double m = 0.5 * (s.a + s.b);
        push(s.a, m);
        push(m, s.b);
    }
    if (pq.empty()) hi = lo;
    return {lo, std::max(hi, lo)};
}

} // namespace bsmod::poly
