#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bsmod {

/// How an enclosure was obtained.  "exact" means exact arithmetic up to
/// root-finding / rounding slop, the others name the numerical scheme whose
/// error model backs the bounds.
enum class Method { exact, grid_refine, quadrature, solver };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::grid_refine: return "grid+refine";
        case Method::quadrature: return "quadrature";
        case Method::solver: return "solver";
    }
    return "?";
}

/// A real quantity carried as an enclosure [lo, hi].
struct CertifiedValue {
    double lo = 0.0;
    double hi = 0.0;
    Method method = Method::exact;

    CertifiedValue() = default;
    CertifiedValue(double lo_, double hi_, Method m) : lo(lo_), hi(hi_), method(m) {
        if (!(lo <= hi)) throw std::invalid_argument("CertifiedValue: lo > hi");
    }

    static CertifiedValue point(double v, Method m = Method::exact) { return {v, v, m}; }

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }

    CertifiedValue operator+(const CertifiedValue& o) const {
        return {lo + o.lo, hi + o.hi, worse(method, o.method)};
    }
    CertifiedValue operator-(const CertifiedValue& o) const {
        return {lo - o.hi, hi - o.lo, worse(method, o.method)};
    }
    /// Scale by a (possibly negative) exact constant.
    CertifiedValue scaled(double c) const {
        double a = c * lo, b = c * hi;
        return {std::min(a, b), std::max(a, b), method};
    }
    /// Intersection; valid when both enclose the same quantity.
    CertifiedValue meet(const CertifiedValue& o) const {
        double a = std::max(lo, o.lo), b = std::min(hi, o.hi);
        if (a > b) {
            // disagreement beyond slop is a logic error upstream; keep the
            // tighter-midpoint union instead of throwing on 1-ulp overlaps
            if (a - b > 1e-9 * (1.0 + std::abs(a))) throw std::logic_error("CertifiedValue::meet: disjoint enclosures");
            double m = 0.5 * (a + b);
            return {m, m, worse(method, o.method)};
        }
        return {a, b, worse(method, o.method)};
    }

    static Method worse(Method a, Method b) { return static_cast<Method>(std::max(static_cast<int>(a), static_cast<int>(b))); }
};

inline CertifiedValue max(const CertifiedValue& a, const CertifiedValue& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi), CertifiedValue::worse(a.method, b.method)};
}

/// Requested tolerance could not be met; carries the best enclosure found.
class ToleranceNotMet : public std::runtime_error {
public:
    CertifiedValue best;
    ToleranceNotMet(const std::string& what, CertifiedValue b)
        : std::runtime_error(what + " (best enclosure [" + std::to_string(b.lo) + ", " + std::to_string(b.hi) + "])"),
          best(b) {}
};

/// Representation does not support the requested operation.
class UnsupportedOperation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sampled (closure) function produced a non-finite value.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bsmod
