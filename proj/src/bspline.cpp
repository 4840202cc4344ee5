#include "bsmod/bspline.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bsmod {

namespace {

constexpr int kMaxOrder = 20;

double binom(int n, int r) {
    double v = 1.0;
    for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
    return v;
}

double factorial(int n) {
    double v = 1.0;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}

} // namespace

double sinc(double x) {
    double ax = std::abs(x);
    if (ax < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

BSplineKernel::BSplineKernel(double h_, int k_) : h(h_), k(k_) {
    if (!(h > 0.0)) throw std::invalid_argument("BSplineKernel: h > 0 required");
    if (k < 1) throw std::invalid_argument("BSplineKernel: k >= 1 required");
    if (k > kMaxOrder) throw UnsupportedOperation("BSplineKernel: order beyond 20 is not supported");
}

double BSplineKernel::eval(double t) const {
    double R = support_radius();
    if (std::abs(t) >= R) return 0.0;
    if (k == 1) return 1.0 / h;
    // chi_h^k(u - kh/2) = 1/(h (k-1)!) sum_{j >= 0, u/h - j > 0} (-1)^j C(k,j) (u/h - j)^{k-1}
    double u = t + R;
    double x = u / h;
    double sum = 0.0, comp = 0.0; // Kahan
    for (int j = 0; j <= k; ++j) {
        if (x - j <= 0.0) break;
        double term = ((j % 2 == 0) ? 1.0 : -1.0) * binom(k, j) * std::pow(x - j, k - 1);
        double y = term - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum / (h * factorial(k - 1));
}

double BSplineKernel::fourier_coeff(long j) const {
    if (j == 0) return 1.0;
    return std::pow(sinc(std::numbers::pi * static_cast<double>(j) * h), k);
}

double BSplineKernel::second_moment_constant() const {
    double sum = 0.0, comp = 0.0;
    for (int j = 0; j <= k / 2; ++j) {
        double base = 0.5 * k - j;
        if (base <= 0.0) break;
        double term = ((j % 2 == 0) ? 1.0 : -1.0) * binom(k, j) * std::pow(base, k + 2);
        double y = term - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return 2.0 * h * h / factorial(k + 2) * sum;
}

CompactKernel BSplineKernel::piecewise() const {
    CompactKernel K;
    double R = support_radius();
    K.continuity = k - 2;
    for (int i = 0; i <= k; ++i) K.knots.push_back(-R + i * h);
    K.coef.resize(k);
    if (k == 1) {
        K.coef[0] = {1.0 / h};
        return K;
    }
    // piece p on [jh, (j+1)h) in u = t + R: expand sum_{i <= j} (-1)^i C(k,i) ((x + (j-i))^{k-1})
    // with x = local/h
    for (int j = 0; j < k; ++j) {
        poly::Coeffs acc(k, 0.0); // in powers of x
        for (int i = 0; i <= j; ++i) {
            double s = ((i % 2 == 0) ? 1.0 : -1.0) * binom(k, i);
            double c = static_cast<double>(j - i);
            // (x + c)^{k-1}
            for (int l = 0; l <= k - 1; ++l) acc[l] += s * binom(k - 1, l) * std::pow(c, k - 1 - l);
        }
        // substitute x = local / h and divide by h (k-1)!
        double denom = h * factorial(k - 1);
        poly::Coeffs c(k, 0.0);
        double hl = 1.0;
        for (int l = 0; l < k; ++l) {
            c[l] = acc[l] / (denom * hl);
            hl *= h;
        }
        K.coef[j] = std::move(c);
    }
    return K;
}

} // namespace bsmod
