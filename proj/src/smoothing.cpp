#include "bsmod/smoothing.hpp"

#include "bsmod/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace bsmod {

namespace {
constexpr double kPi = std::numbers::pi;
}

PeriodicFunction convolve(const PeriodicFunction& f, const BSplineKernel& kernel) {
    PeriodicFunction r;
    if (f.has_trig()) {
        TrigPoly t = f.trig().filtered([&](int j) { return kernel.fourier_coeff(j); });
        r = r + PeriodicFunction::from_trig(std::move(t));
    }
    if (f.has_piecewise()) {
        r = r + PeriodicFunction::from_piecewise(convolve_compact(f.piecewise(), kernel.piecewise()));
    }
    if (f.has_closure()) {
        // quadrature-based closure; tolerance recorded in the error model
        PeriodicFunction cl = f.closure_part();
        double R = kernel.support_radius();
        auto k = kernel;
        auto fn = [cl, k, R](double t) {
            return quad::adaptive([&](double v) { return cl(t - v) * k.eval(v); }, -R, R, 1e-11);
        };
        r = r + PeriodicFunction::from_closure(fn, cl.lipschitz_bound());
    }
    return r;
}

CompactKernel construction_g_kernel(double h) {
    // (2/h)(1 - |v|/h)^3 on [-h, h]
    CompactKernel K;
    K.knots = {-h, 0.0, h};
    K.continuity = 2;
    double h2 = h * h, h3 = h2 * h, h4 = h3 * h;
    // left piece, local x = v + h: (2/h)(x/h)^3
    K.coef.push_back({0.0, 0.0, 0.0, 2.0 / h4});
    // right piece, local x = v: (2/h)(1 - x/h)^3
    K.coef.push_back({2.0 / h, -6.0 / h2, 6.0 / h3, -2.0 / h4});
    return K;
}

CompactKernel construction_g1_kernel(double h) {
    // (24/h^3)(h^2/8 - 2 v^2) on [-h/4, h/4]
    CompactKernel K;
    double q = h / 4.0;
    K.knots = {-q, q};
    K.continuity = 0;
    // local x = v + q: value = 3/h - (48/h^3)(x - q)^2
    double c0 = 3.0 / h - 48.0 / (h * h * h) * q * q;
    double c1 = 96.0 / (h * h * h) * q;
    double c2 = -48.0 / (h * h * h);
    K.coef.push_back({c0, c1, c2});
    return K;
}

CompactKernel construction_g2_kernel(double h) {
    // (12/h^3)(h/2 - |v|)^2 on [-h/2, h/2]
    CompactKernel K;
    double q = h / 2.0;
    K.knots = {-q, 0.0, q};
    K.continuity = 0;
    double s = 12.0 / (h * h * h);
    // left: local x = v + q, value s * x^2
    K.coef.push_back({0.0, 0.0, s});
    // right: local x = v, value s * (q - x)^2
    K.coef.push_back({s * q * q, -2.0 * s * q, s});
    return K;
}

namespace {

/// coefficientwise multiplier m_j = integral_0^H w(u) sinc(pi j u)^kk du with
/// normalized weight; used for the trig path of the constructions
TrigPoly filtered_by_integral(const TrigPoly& t, double H, int kk, const std::function<double(double)>& weight) {
    return t.filtered([&](int j) {
        if (j == 0) return 1.0;
        auto integrand = [&](double u) { return weight(u) * std::pow(sinc(kPi * j * u), kk); };
        return quad::adaptive(integrand, 0.0, H, 1e-12);
    });
}

PeriodicFunction closure_averaged(const PeriodicFunction& f, const CompactKernel& K) {
    auto fn = [f, K](double t) {
        return quad::adaptive([&](double v) { return f(t - v) * K.eval(v); }, K.support_lo(), K.support_hi(), 1e-11);
    };
    return PeriodicFunction::from_closure(fn, f.lipschitz_bound());
}

} // namespace

PeriodicFunction construction_g(const PeriodicFunction& f, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("construction_g: h > 0 required");
    PeriodicFunction r;
    if (f.has_trig()) {
        // weight (12/h^3) u^2 (1 - u/h) on [0, h], unit mass
        auto w = [h](double u) { return 12.0 / (h * h * h) * u * u * (1.0 - u / h); };
        r = r + PeriodicFunction::from_trig(filtered_by_integral(f.trig(), h, 2, w));
    }
    if (f.has_piecewise())
        r = r + PeriodicFunction::from_piecewise(convolve_compact(f.piecewise(), construction_g_kernel(h)));
    if (f.has_closure()) r = r + closure_averaged(f.closure_part(), construction_g_kernel(h));
    return r;
}

std::pair<PeriodicFunction, PeriodicFunction> construction_g1_g2(const PeriodicFunction& f, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("construction_g1_g2: h > 0 required");
    PeriodicFunction g1, g2;
    if (f.has_trig()) {
        auto w = [h](double u) { return 24.0 / (h * h * h) * u * u; };
        g1 = g1 + PeriodicFunction::from_trig(filtered_by_integral(f.trig(), h / 2.0, 1, w));
        g2 = g2 + PeriodicFunction::from_trig(filtered_by_integral(f.trig(), h / 2.0, 2, w));
    }
    if (f.has_piecewise()) {
        g1 = g1 + PeriodicFunction::from_piecewise(convolve_compact(f.piecewise(), construction_g1_kernel(h)));
        g2 = g2 + PeriodicFunction::from_piecewise(convolve_compact(f.piecewise(), construction_g2_kernel(h)));
    }
    if (f.has_closure()) {
        PeriodicFunction cl = f.closure_part();
        g1 = g1 + closure_averaged(cl, construction_g1_kernel(h));
        g2 = g2 + closure_averaged(cl, construction_g2_kernel(h));
    }
    return {std::move(g1), std::move(g2)};
}

} // namespace bsmod
