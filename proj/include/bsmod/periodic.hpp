#pragma once

// PeriodicFunction: the umbrella type for 1-periodic functions.  A value is
// kept in a flat canonical form  trig part + piecewise part + closure terms;
// arithmetic on the exact carriers (TrigPoly, PiecewisePoly) stays exact,
// closures accumulate as sampled terms with a modulus-of-continuity hint.

#include "bsmod/certified.hpp"
#include "bsmod/piecewise.hpp"
#include "bsmod/trigpoly.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bsmod {

struct ClosureTerm {
    std::function<double(double)> fn;
    double lipschitz_hint = 201.0; // ~ 2 pi * 32, the default degree guess
};

class PeriodicFunction {
public:
    PeriodicFunction() = default;

    static PeriodicFunction constant(double c);
    static PeriodicFunction from_trig(TrigPoly t);
    static PeriodicFunction from_piecewise(PiecewisePoly p);
    static PeriodicFunction square_wave(int n);
    static PeriodicFunction from_closure(std::function<double(double)> fn, double lipschitz_hint = 201.0);

    bool has_trig() const { return trig_.has_value(); }
    bool has_piecewise() const { return pw_.has_value(); }
    bool has_closure() const { return !closures_.empty(); }
    bool is_exact() const { return closures_.empty(); }
    const TrigPoly& trig() const { return *trig_; }
    const PiecewisePoly& piecewise() const { return *pw_; }
    /// the sampled terms alone (empty function if none)
    PeriodicFunction closure_part() const;
    std::optional<int> square_wave_n() const { return square_wave_n_; }

    double operator()(double t) const; // eval, t reduced mod 1
    PeriodicFunction operator+(const PeriodicFunction& o) const;
    PeriodicFunction operator-(const PeriodicFunction& o) const;
    PeriodicFunction scaled(double c) const;
    PeriodicFunction shifted(double s) const; // g(t) = f(t - s)

    PeriodicFunction second_difference(double u) const;
    PeriodicFunction derivative(int order) const;

    /// Certified enclosure of sup |f|.
    CertifiedValue sup_norm(double tol = 1e-10) const;

    /// true if derivative(order) is available for this representation
    bool differentiable(int order) const;

    /// Upper bound on |f'| where it exists (jumps excluded); 0 for constants.
    double lipschitz_bound() const;

    /// Jump discontinuities (from the piecewise part).
    std::vector<Jump> jumps() const;

    /// JSON document (representation tag + payload).  Closures do not serialize.
    std::string to_json() const;
    static PeriodicFunction parse_json(const std::string& doc);

private:
    std::optional<TrigPoly> trig_;
    std::optional<PiecewisePoly> pw_;
    std::vector<ClosureTerm> closures_;
    std::optional<int> square_wave_n_; // set only for a pristine square wave

    friend class Moduli;
};

/// sup-norm of a difference of two functions without materializing a closure
/// (handles the mixed trig/piecewise case with a joint branch-and-bound).
CertifiedValue sup_norm_diff(const PeriodicFunction& a, const PeriodicFunction& b, double tol = 1e-10);

/// Operation-style free functions mirroring the library surface.
inline double eval(const PeriodicFunction& f, double t) { return f(t); }
inline PeriodicFunction second_difference(const PeriodicFunction& f, double u) { return f.second_difference(u); }
inline PeriodicFunction derivative(const PeriodicFunction& f, int order) { return f.derivative(order); }
inline CertifiedValue sup_norm(const PeriodicFunction& f, double tol = 1e-10) { return f.sup_norm(tol); }

} // namespace bsmod
