#pragma once

// Real trigonometric polynomials  tau(t) = a0 + sum_j a_j cos(2 pi j t) + b_j sin(2 pi j t).
// Conjugate symmetry of the complex coefficients is built into the storage.

#include "bsmod/certified.hpp"

#include <functional>
#include <vector>

namespace bsmod {

class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(double constant) : a0_(constant) {}
    TrigPoly(double a0, std::vector<double> ac, std::vector<double> as);

    static TrigPoly harmonic(int j, double cos_amp, double sin_amp);

    double constant_term() const { return a0_; }
    /// cos/sin coefficient of frequency j (0 if beyond stored range)
    double cos_coeff(int j) const { return (j >= 1 && j <= size()) ? ac_[j - 1] : (j == 0 ? a0_ : 0.0); }
    double sin_coeff(int j) const { return (j >= 1 && j <= size()) ? as_[j - 1] : 0.0; }
    int size() const { return static_cast<int>(ac_.size()); }

    /// Largest frequency with a coefficient above the relative zero threshold.
    int degree() const;

    double eval(double t) const;
    double eval_derivative(double t) const;

    TrigPoly operator+(const TrigPoly& o) const;
    TrigPoly operator-(const TrigPoly& o) const;
    TrigPoly scaled(double c) const;
    TrigPoly shifted(double s) const; // g(t) = f(t - s)
    TrigPoly derivative(int order = 1) const;
    TrigPoly second_difference(double u) const;
    /// Apply a Fourier multiplier m(j) to every frequency (m(0) to the constant).
    TrigPoly filtered(const std::function<double(int)>& multiplier) const;

    /// sum over j of (2 pi j)^order * (|a_j| + |b_j|); order 0 includes |a0|.
    double deriv_abs_sum(int order) const;

    /// Certified enclosure of sup |tau|; grid seeding + derivative bisection
    /// for the lower bound, branch-and-bound with a quadratic local model for
    /// the upper bound.
    CertifiedValue sup_norm(double tol = 1e-10, long budget = 400000) const;

private:
    double a0_ = 0.0;
    std::vector<double> ac_, as_; // index j-1 holds frequency j
    void match_size(const TrigPoly& o, TrigPoly& r) const;
};

} // namespace bsmod
