#include "bsmod/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace bsmod {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TrigPoly::TrigPoly(double a0, std::vector<double> ac, std::vector<double> as)
    : a0_(a0), ac_(std::move(ac)), as_(std::move(as)) {
    if (ac_.size() != as_.size()) {
        std::size_t n = std::max(ac_.size(), as_.size());
        ac_.resize(n, 0.0);
        as_.resize(n, 0.0);
    }
}

TrigPoly TrigPoly::harmonic(int j, double cos_amp, double sin_amp) {
    if (j < 0) throw std::invalid_argument("harmonic: j >= 0");
    if (j == 0) return TrigPoly(cos_amp);
    std::vector<double> ac(j, 0.0), as(j, 0.0);
    ac[j - 1] = cos_amp;
    as[j - 1] = sin_amp;
    return TrigPoly(0.0, std::move(ac), std::move(as));
}

int TrigPoly::degree() const {
    double m = std::abs(a0_);
    for (int j = 1; j <= size(); ++j) m = std::max(m, std::abs(ac_[j - 1]) + std::abs(as_[j - 1]));
    double thr = 1e-14 * m;
    for (int j = size(); j >= 1; --j)
        if (std::abs(ac_[j - 1]) + std::abs(as_[j - 1]) > thr) return j;
    return 0;
}

double TrigPoly::eval(double t) const {
    double v = a0_;
    for (int j = 1; j <= size(); ++j) {
        double th = kTwoPi * j * t;
        v += ac_[j - 1] * std::cos(th) + as_[j - 1] * std::sin(th);
    }
    return v;
}

double TrigPoly::eval_derivative(double t) const {
    double v = 0.0;
    for (int j = 1; j <= size(); ++j) {
        double w = kTwoPi * j, th = w * t;
        v += w * (-ac_[j - 1] * std::sin(th) + as_[j - 1] * std::cos(th));
    }
    return v;
}

void TrigPoly::match_size(const TrigPoly& o, TrigPoly& r) const {
    r.ac_.assign(std::max(ac_.size(), o.ac_.size()), 0.0);
    r.as_.assign(r.ac_.size(), 0.0);
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
    TrigPoly r;
    match_size(o, r);
    r.a0_ = a0_ + o.a0_;
    for (std::size_t j = 0; j < ac_.size(); ++j) { r.ac_[j] += ac_[j]; r.as_[j] += as_[j]; }
    for (std::size_t j = 0; j < o.ac_.size(); ++j) { r.ac_[j] += o.ac_[j]; r.as_[j] += o.as_[j]; }
    return r;
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const { return *this + o.scaled(-1.0); }

TrigPoly TrigPoly::scaled(double c) const {
    TrigPoly r = *this;
    r.a0_ *= c;
    for (double& v : r.ac_) v *= c;
    for (double& v : r.as_) v *= c;
    return r;
}

TrigPoly TrigPoly::shifted(double s) const {
    TrigPoly r = *this;
    for (int j = 1; j <= size(); ++j) {
        double ph = kTwoPi * j * s, c = std::cos(ph), sn = std::sin(ph);
        double a = ac_[j - 1], b = as_[j - 1];
        r.ac_[j - 1] = a * c - b * sn;
        r.as_[j - 1] = a * sn + b * c;
    }
    return r;
}

TrigPoly TrigPoly::derivative(int order) const {
    TrigPoly r = *this;
    for (int k = 0; k < order; ++k) {
        double a0 = 0.0;
        TrigPoly d = r;
        d.a0_ = a0;
        for (int j = 1; j <= size(); ++j) {
            double w = kTwoPi * j;
            d.ac_[j - 1] = w * r.as_[j - 1];
            d.as_[j - 1] = -w * r.ac_[j - 1];
        }
        r = d;
    }
    return r;
}

TrigPoly TrigPoly::second_difference(double u) const {
    TrigPoly r = *this;
    r.a0_ = 0.0;
    for (int j = 1; j <= size(); ++j) {
        double m = 2.0 * std::cos(kTwoPi * j * u) - 2.0;
        r.ac_[j - 1] *= m;
        r.as_[j - 1] *= m;
    }
    return r;
}

TrigPoly TrigPoly::filtered(const std::function<double(int)>& multiplier) const {
    TrigPoly r = *this;
    r.a0_ = a0_ * multiplier(0);
    for (int j = 1; j <= size(); ++j) {
        double m = multiplier(j);
        r.ac_[j - 1] *= m;
        r.as_[j - 1] *= m;
    }
    return r;
}

double TrigPoly::deriv_abs_sum(int order) const {
    double s = (order == 0) ? std::abs(a0_) : 0.0;
    for (int j = 1; j <= size(); ++j)
        s += std::pow(kTwoPi * j, order) * (std::abs(ac_[j - 1]) + std::abs(as_[j - 1]));
    return s;
}

CertifiedValue TrigPoly::sup_norm(double tol, long budget) const {
    int m = degree();
    if (m == 0) return CertifiedValue::point(std::abs(a0_), Method::exact);

    const double B2 = deriv_abs_sum(2);
    // evaluation slop: argument + summation rounding
    double slop = 0.0;
    for (int j = 1; j <= size(); ++j) slop += (2.0 + kTwoPi * j) * (std::abs(ac_[j - 1]) + std::abs(as_[j - 1]));
    slop = (slop + std::abs(a0_)) * 2.2e-16;

    const int N = 32 * std::max(m, 1);
    std::vector<double> vals(N + 1);
    for (int i = 0; i <= N; ++i) vals[i] = eval(static_cast<double>(i) / N);

    double lo = 0.0;
    for (double v : vals) lo = std::max(lo, std::abs(v));

    // refine sampled local maxima of |tau| by bisection on the derivative
    for (int i = 0; i < N; ++i) {
        int il = (i + N - 1) % N, ir = (i + 1) % N;
        if (std::abs(vals[i]) < std::abs(vals[il]) || std::abs(vals[i]) < std::abs(vals[ir])) continue;
        double sgn = vals[i] >= 0.0 ? 1.0 : -1.0;
        double a = (i - 1.0) / N, b = (i + 1.0) / N;
        double da = sgn * eval_derivative(a), db = sgn * eval_derivative(b);
        if (!(da > 0.0 && db < 0.0)) continue;
        for (int it = 0; it < 80; ++it) {
            double c = 0.5 * (a + b);
            double dc = sgn * eval_derivative(c);
            if (dc > 0.0) a = c; else b = c;
        }
        lo = std::max(lo, std::abs(eval(0.5 * (a + b))));
    }
    lo = std::max(0.0, lo - slop);

    struct Seg {
        double a, b, ub;
        bool operator<(const Seg& o) const { return ub < o.ub; }
    };
    auto seg_bound = [&](double a, double b) {
        double s = 0.5 * (a + b), r = 0.5 * (b - a);
        return std::abs(eval(s)) + r * std::abs(eval_derivative(s)) + 0.5 * r * r * B2 + slop;
    };
    std::priority_queue<Seg> pq;
    for (int i = 0; i < N; ++i) {
        double a = static_cast<double>(i) / N, b = static_cast<double>(i + 1) / N;
        pq.push({a, b, seg_bound(a, b)});
    }
    double hi = lo;
    long used = 0;
    while (!pq.empty()) {
        Seg s = pq.top();
        pq.pop();
        hi = std::max(lo, s.ub);
        if (s.ub <= lo + tol) break;
        if (++used > budget) throw ToleranceNotMet("sup_norm: refinement budget exhausted", CertifiedValue{lo, hi, Method::grid_refine});
        double mid = 0.5 * (s.a + s.b);
        lo = std::max(lo, std::abs(eval(mid)) - slop);
        pq.push({s.a, mid, seg_bound(s.a, mid)});
        pq.push({mid, s.b, seg_bound(mid, s.b)});
    }
    if (pq.empty()) hi = lo;
    return {lo, std::max(hi, lo), Method::grid_refine};
}

} // namespace bsmod
