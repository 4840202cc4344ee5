#include "bsmod/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsmod {

namespace {

constexpr double kBpMergeTol = 1e-13;

double frac(double t) {
    double f = t - std::floor(t);
    if (f >= 1.0) f = 0.0; // guard against rounding at integers
    return f;
}

std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> u;
    u.reserve(a.size() + b.size());
    u.insert(u.end(), a.begin(), a.end());
    u.insert(u.end(), b.begin(), b.end());
    std::sort(u.begin(), u.end());
    std::vector<double> out;
    for (double x : u)
        if (out.empty() || x - out.back() > kBpMergeTol) out.push_back(x);
    if (out.empty() || out.front() > kBpMergeTol) out.insert(out.begin(), 0.0);
    else out.front() = 0.0;
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// CompactKernel

double CompactKernel::eval(double v) const {
    if (v < knots.front() || v >= knots.back()) return 0.0;
    std::size_t i = std::upper_bound(knots.begin(), knots.end(), v) - knots.begin();
    if (i == 0) return 0.0;
    --i;
    if (i >= coef.size()) return 0.0;
    return poly::eval(coef[i], v - knots[i]);
}

double CompactKernel::piece_deriv_at(std::size_t i, int r, double v) const {
    poly::Coeffs c = coef[i];
    for (int k = 0; k < r; ++k) c = poly::derivative(c);
    return poly::eval(c, v - knots[i]);
}

double CompactKernel::mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
        poly::Coeffs a = poly::antiderivative(coef[i]);
        m += poly::eval(a, knots[i + 1] - knots[i]);
    }
    return m;
}

double CompactKernel::half_second_moment() const {
    double m = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
        if (knots[i + 1] <= 0.0) continue;
        double a = std::max(0.0, knots[i]);
        // integrate v^2 * p(v - knots[i]) over [a, knots[i+1]]
        poly::Coeffs p = coef[i]; // local x = v - knots[i]
        // v^2 = (x + knots[i])^2
        double k0 = knots[i];
        poly::Coeffs v2 = {k0 * k0, 2.0 * k0, 1.0};
        poly::Coeffs prod(p.size() + 2, 0.0);
        for (std::size_t ip = 0; ip < p.size(); ++ip)
            for (std::size_t iv = 0; iv < 3; ++iv) prod[ip + iv] += p[ip] * v2[iv];
        poly::Coeffs A = poly::antiderivative(prod);
        m += poly::eval(A, knots[i + 1] - k0) - poly::eval(A, a - k0);
    }
    return m;
}

double CompactKernel::tail_mass(double d) const {
    if (d >= knots.back()) return 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
        double a = std::max(d, knots[i]), b = knots[i + 1];
        if (a >= b) continue;
        poly::Coeffs A = poly::antiderivative(coef[i]);
        m += poly::eval(A, b - knots[i]) - poly::eval(A, a - knots[i]);
    }
    return m;
}

// ---------------------------------------------------------------------------
// PiecewisePoly

PiecewisePoly::PiecewisePoly(std::vector<double> bp, std::vector<poly::Coeffs> coef, int continuity)
    : bp_(std::move(bp)), coef_(std::move(coef)), continuity_(continuity) {
    if (bp_.empty() || bp_.size() != coef_.size()) throw std::invalid_argument("PiecewisePoly: size mismatch");
    if (bp_.front() != 0.0) throw std::invalid_argument("PiecewisePoly: first breakpoint must be 0");
    for (std::size_t i = 1; i < bp_.size(); ++i)
        if (!(bp_[i] > bp_[i - 1]) || !(bp_[i] < 1.0)) throw std::invalid_argument("PiecewisePoly: breakpoints not sorted in [0,1)");
}

PiecewisePoly PiecewisePoly::constant(double c) {
    return PiecewisePoly({0.0}, {poly::Coeffs{c}}, 1000);
}

PiecewisePoly PiecewisePoly::square_wave(int n) {
    if (n < 1) throw std::invalid_argument("square_wave: n >= 1 required");
    // sign cos(2 pi n t): +1 on |t| < 1/(4n), alternating, jumps at odd multiples of 1/(4n)
    std::vector<double> bp;
    std::vector<poly::Coeffs> coef;
    bp.push_back(0.0);
    coef.push_back({1.0});
    for (int m = 0; m < 2 * n; ++m) {
        double t = (2.0 * m + 1.0) / (4.0 * n);
        if (t >= 1.0) break;
        bp.push_back(t);
        coef.push_back({m % 2 == 0 ? -1.0 : 1.0});
    }
    return PiecewisePoly(std::move(bp), std::move(coef), -1);
}

PiecewisePoly PiecewisePoly::periodize(const CompactKernel& K) {
    std::vector<double> bp;
    for (double k : K.knots) bp.push_back(frac(k));
    std::sort(bp.begin(), bp.end());
    bp = merge_breakpoints(bp, {});
    std::vector<poly::Coeffs> coef(bp.size());
    for (std::size_t ci = 0; ci < bp.size(); ++ci) {
        double a = bp[ci], b = (ci + 1 < bp.size()) ? bp[ci + 1] : 1.0;
        double tc = 0.5 * (a + b);
        poly::Coeffs acc;
        int mlo = static_cast<int>(std::floor(K.support_lo() - tc)) - 1;
        int mhi = static_cast<int>(std::ceil(K.support_hi() - tc)) + 1;
        for (int m = mlo; m <= mhi; ++m) {
            double y = tc + m;
            if (y < K.support_lo() || y >= K.support_hi()) continue;
            std::size_t i = std::upper_bound(K.knots.begin(), K.knots.end(), y) - K.knots.begin() - 1;
            // local x on the cell: value K.coef[i]((a + x + m) - knots[i])
            poly::add_scaled_inplace(acc, poly::taylor_shift(K.coef[i], a + m - K.knots[i]), 1.0);
        }
        if (acc.empty()) acc = {0.0};
        coef[ci] = std::move(acc);
    }
    return PiecewisePoly(std::move(bp), std::move(coef), K.continuity);
}

std::size_t PiecewisePoly::piece_index(double t) const {
    std::size_t i = std::upper_bound(bp_.begin(), bp_.end(), t) - bp_.begin();
    return i == 0 ? bp_.size() - 1 : i - 1;
}

double PiecewisePoly::eval(double t) const {
    double x = frac(t);
    std::size_t i = piece_index(x);
    return poly::eval(coef_[i], x - bp_[i]);
}

double PiecewisePoly::eval_left(double t) const {
    double x = frac(t);
    // limit from the left: if exactly at a breakpoint, use previous piece
    std::size_t i = piece_index(x);
    if (x == bp_[i]) {
        std::size_t j = (i == 0) ? bp_.size() - 1 : i - 1;
        double b = (j + 1 < bp_.size()) ? bp_[j + 1] : 1.0;
        return poly::eval(coef_[j], b - bp_[j]);
    }
    return poly::eval(coef_[i], x - bp_[i]);
}

int PiecewisePoly::max_degree() const {
    std::size_t d = 0;
    for (const auto& c : coef_) d = std::max(d, c.empty() ? 0 : c.size() - 1);
    return static_cast<int>(d);
}

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& o) const {
    std::vector<double> bp = merge_breakpoints(bp_, o.bp_);
    std::vector<poly::Coeffs> coef(bp.size());
    for (std::size_t ci = 0; ci < bp.size(); ++ci) {
        double a = bp[ci], b = (ci + 1 < bp.size()) ? bp[ci + 1] : 1.0;
        double tc = 0.5 * (a + b);
        std::size_t i = piece_index(tc), j = o.piece_index(tc);
        poly::Coeffs s = poly::taylor_shift(coef_[i], a - bp_[i]);
        poly::add_scaled_inplace(s, poly::taylor_shift(o.coef_[j], a - o.bp_[j]), 1.0);
        coef[ci] = std::move(s);
    }
    return PiecewisePoly(std::move(bp), std::move(coef), std::min(continuity_, o.continuity_));
}

PiecewisePoly PiecewisePoly::operator-(const PiecewisePoly& o) const { return *this + o.scaled(-1.0); }

PiecewisePoly PiecewisePoly::scaled(double c) const {
    PiecewisePoly r = *this;
    for (auto& p : r.coef_)
        for (double& v : p) v *= c;
    return r;
}

PiecewisePoly PiecewisePoly::shifted(double s) const {
    // g(t) = f(t - s): breakpoints move to bp + s (mod 1)
    struct Seg { double start; poly::Coeffs c; };
    std::vector<Seg> segs;
    for (std::size_t i = 0; i < bp_.size(); ++i) segs.push_back({frac(bp_[i] + s), coef_[i]});
    std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.start < b.start; });
    std::vector<double> bp;
    std::vector<poly::Coeffs> coef;
    if (segs.front().start > kBpMergeTol) {
        // piece straddling 0: it is the one that started last (wrapped)
        const Seg& last = segs.back();
        double d = 1.0 - last.start; // distance already consumed before 0
        bp.push_back(0.0);
        coef.push_back(poly::taylor_shift(last.c, d));
    }
    for (const Seg& sg : segs) {
        if (!bp.empty() && sg.start - bp.back() <= kBpMergeTol) continue;
        if (bp.empty() && sg.start <= kBpMergeTol) {
            bp.push_back(0.0);
            coef.push_back(sg.c);
            continue;
        }
        bp.push_back(sg.start);
        coef.push_back(sg.c);
    }
    return PiecewisePoly(std::move(bp), std::move(coef), continuity_);
}

PiecewisePoly PiecewisePoly::derivative(int order) const {
    if (order < 0) throw std::invalid_argument("derivative: order >= 0");
    if (order == 0) return *this;
    if (continuity_ < order - 1)
        throw UnsupportedOperation("derivative: piecewise function lacks the required continuity");
    PiecewisePoly r = *this;
    for (int k = 0; k < order; ++k)
        for (auto& c : r.coef_) c = poly::derivative(c);
    for (auto& c : r.coef_)
        if (c.empty()) c = {0.0};
    r.continuity_ = continuity_ - order;
    return r;
}

double PiecewisePoly::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < bp_.size(); ++i) {
        double b = (i + 1 < bp_.size()) ? bp_[i + 1] : 1.0;
        poly::Coeffs A = poly::antiderivative(coef_[i]);
        m += poly::eval(A, b - bp_[i]);
    }
    return m;
}

CertifiedValue PiecewisePoly::sup_norm() const {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < bp_.size(); ++i) {
        double b = (i + 1 < bp_.size()) ? bp_[i + 1] : 1.0;
        auto r = poly::abs_max_on(coef_[i], b - bp_[i]);
        lo = std::max(lo, r.lo);
        hi = std::max(hi, r.hi);
    }
    return {lo, hi, Method::exact};
}

CertifiedValue PiecewisePoly::sup_on(double a, double b) const {
    if (!(b > a)) throw std::invalid_argument("sup_on: empty arc");
    if (b - a >= 1.0) return sup_norm();
    double lo = 0.0, hi = 0.0;
    // walk pieces intersecting [a, b] (wrapping)
    double t = a;
    for (int guard = 0; guard < 4 * static_cast<int>(bp_.size()) + 8 && t < b - 1e-15; ++guard) {
        double x = frac(t);
        std::size_t i = piece_index(x);
        double pe = (i + 1 < bp_.size()) ? bp_[i + 1] : 1.0;
        double seg_end = std::min(b, t + (pe - x));
        poly::Coeffs local = poly::taylor_shift(coef_[i], x - bp_[i]);
        auto r = poly::abs_max_on(local, seg_end - t);
        lo = std::max(lo, r.lo);
        hi = std::max(hi, r.hi);
        t = seg_end;
    }
    return {lo, hi, Method::exact};
}

double PiecewisePoly::lipschitz_bound() const {
    double L = 0.0;
    for (std::size_t i = 0; i < bp_.size(); ++i) {
        double w = ((i + 1 < bp_.size()) ? bp_[i + 1] : 1.0) - bp_[i];
        poly::Coeffs d = poly::derivative(coef_[i]);
        L = std::max(L, poly::abs_max_on(d, w, 1e-10).hi);
    }
    return L;
}

std::vector<Jump> PiecewisePoly::jumps(double tol) const {
    std::vector<Jump> out;
    for (std::size_t i = 0; i < bp_.size(); ++i) {
        std::size_t j = (i == 0) ? bp_.size() - 1 : i - 1;
        double b = (j + 1 < bp_.size()) ? bp_[j + 1] : 1.0;
        double left = poly::eval(coef_[j], b - bp_[j]);
        double right = coef_[i].empty() ? 0.0 : coef_[i][0];
        if (std::abs(right - left) > tol) out.push_back({bp_[i], right - left});
    }
    return out;
}

PiecewisePoly PiecewisePoly::second_difference(double u) const {
    return shifted(-u) + shifted(u) - *this - *this;
}

// ---------------------------------------------------------------------------
// Exact convolution with a compact kernel.
//
// With F_m the m-fold antiderivative of f (F_0 = f) and K piecewise with
// knots s_0 < ... < s_P, repeated integration by parts gives
//   (f*K)(t) = sum_i sum_r [ K_i^(r)(s_i) F_{r+1}(t-s_i) - K_i^(r)(s_{i+1}) F_{r+1}(t-s_{i+1}) ].
// Each F_m splits as a periodic piecewise part plus a global polynomial
// drift, so every term is polynomial between the induced breakpoints.

namespace {

struct IterAnti {
    // F_m(x) = P[m].eval-ish(frac combination) + q[m](x); P pieces share f's breakpoints
    std::vector<std::vector<poly::Coeffs>> P; // P[m][piece], local coords, m = 1..M
    std::vector<poly::Coeffs> q;              // q[m], global polynomial
};

IterAnti build_antiderivatives(const std::vector<double>& bp, const std::vector<poly::Coeffs>& coef, int M) {
    IterAnti R;
    R.P.resize(M + 1);
    R.q.resize(M + 1);
    R.q[0] = {};
    std::vector<poly::Coeffs> cur = coef; // periodic part of F_m
    for (int m = 1; m <= M; ++m) {
        // integrate periodic part cur from 0, accumulate piece constants
        std::vector<poly::Coeffs> next(cur.size());
        double acc = 0.0;
        double mu = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            double b = (i + 1 < bp.size()) ? bp[i + 1] : 1.0;
            poly::Coeffs A = poly::antiderivative(cur[i]);
            A[0] = acc;
            acc = poly::eval(A, b - bp[i]);
            next[i] = std::move(A);
        }
        mu = acc; // integral over one period
        // subtract mu * x to make it periodic: local x at bp[i]: mu*(bp[i] + x)
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (next[i].size() < 2) next[i].resize(2, 0.0);
            next[i][0] -= mu * bp[i];
            next[i][1] -= mu;
        }
        R.P[m] = next;
        // q_m = antiderivative(q_{m-1}) + mu * x
        poly::Coeffs qm = poly::antiderivative(R.q[m - 1]);
        if (qm.size() < 2) qm.resize(2, 0.0);
        qm[1] += mu;
        R.q[m] = std::move(qm);
        cur = std::move(next);
    }
    return R;
}

} // namespace

PiecewisePoly convolve_compact(const PiecewisePoly& f, const CompactKernel& K) {
    const auto& fbp = f.breakpoints();
    const auto& fcoef = f.pieces();
    int D = 0;
    for (const auto& c : K.coef) D = std::max<int>(D, c.empty() ? 0 : static_cast<int>(c.size()) - 1);
    IterAnti FA = build_antiderivatives(fbp, fcoef, D + 1);

    std::vector<double> bp;
    for (double b : fbp)
        for (double s : K.knots) bp.push_back(frac(b + s));
    std::sort(bp.begin(), bp.end());
    bp = merge_breakpoints(bp, {});

    std::vector<poly::Coeffs> out(bp.size());
    for (std::size_t ci = 0; ci < bp.size(); ++ci) {
        double a = bp[ci], b = (ci + 1 < bp.size()) ? bp[ci + 1] : 1.0;
        double tc = 0.5 * (a + b);
        poly::Coeffs acc;
        for (std::size_t i = 0; i < K.coef.size(); ++i) {
            int deg = K.coef[i].empty() ? 0 : static_cast<int>(K.coef[i].size()) - 1;
            for (int r = 0; r <= deg; ++r) {
                for (int endsel = 0; endsel < 2; ++endsel) {
                    double v = endsel == 0 ? K.knots[i] : K.knots[i + 1];
                    double sgn = endsel == 0 ? 1.0 : -1.0;
                    double kv = K.piece_deriv_at(i, r, v);
                    if (kv == 0.0) continue;
                    int m = r + 1;
                    // F_m(t - v) for t in [a, b): periodic part piece fixed
                    double ymid = tc - v;
                    double w = ymid - std::floor(ymid);
                    if (w >= 1.0) w = 0.0;
                    std::size_t jp = std::upper_bound(fbp.begin(), fbp.end(), w) - fbp.begin();
                    jp = (jp == 0) ? fbp.size() - 1 : jp - 1;
                    // local coord u(x) = (w - fbp[jp]) + (x - (tc - a)) for t = a + x
                    double d_p = (w - fbp[jp]) - (tc - a);
                    poly::add_scaled_inplace(acc, poly::taylor_shift(FA.P[m][jp], d_p), sgn * kv);
                    // drift q_m(t - v), t = a + x
                    poly::add_scaled_inplace(acc, poly::taylor_shift(FA.q[m], a - v), sgn * kv);
                }
            }
        }
        if (acc.empty()) acc = {0.0};
        out[ci] = std::move(acc);
    }
    int cont = f.continuity() + K.continuity + 2;
    return PiecewisePoly(std::move(bp), std::move(out), cont);
}

double convolve_compact_at(const PiecewisePoly& f, const CompactKernel& K, double t) {
    // integral over v of f(t - v) K(v): split at kernel knots and at points
    // where t - v crosses f's breakpoints, then integrate exactly.
    const auto& fbp = f.breakpoints();
    std::vector<double> cuts(K.knots);
    for (double b : fbp) {
        // t - v = b + m  =>  v = t - b - m
        double v0 = t - b;
        int mlo = static_cast<int>(std::floor(v0 - K.support_hi())) - 1;
        int mhi = static_cast<int>(std::ceil(v0 - K.support_lo())) + 1;
        for (int m = mlo; m <= mhi; ++m) {
            double v = v0 - m;
            if (v > K.support_lo() && v < K.support_hi()) cuts.push_back(v);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-15) continue;
        if (b <= K.support_lo() || a >= K.support_hi()) continue;
        double vm = 0.5 * (a + b);
        std::size_t ki = std::upper_bound(K.knots.begin(), K.knots.end(), vm) - K.knots.begin() - 1;
        // f(t - v) as polynomial in local x = v - a: argument y = (t - a) - x
        double y0 = t - vm;
        double w = y0 - std::floor(y0);
        if (w >= 1.0) w = 0.0;
        std::size_t jp = std::upper_bound(fbp.begin(), fbp.end(), w) - fbp.begin();
        jp = (jp == 0) ? fbp.size() - 1 : jp - 1;
        // f piece local coord: u(x) = (w - fbp[jp]) + (vm - a) - x  (decreasing in x)
        const poly::Coeffs& fp = f.pieces()[jp];
        poly::Coeffs fshift = poly::taylor_shift(fp, (w - fbp[jp]) + (vm - a));
        // substitute x -> -x: negate odd coefficients
        for (std::size_t ii = 1; ii < fshift.size(); ii += 2) fshift[ii] = -fshift[ii];
        poly::Coeffs kshift = poly::taylor_shift(K.coef[ki], a - K.knots[ki]);
        // product and integrate over x in [0, b - a]
        poly::Coeffs prod(fshift.size() + kshift.size(), 0.0);
        for (std::size_t p = 0; p < fshift.size(); ++p)
            for (std::size_t q = 0; q < kshift.size(); ++q) prod[p + q] += fshift[p] * kshift[q];
        poly::Coeffs A = poly::antiderivative(prod);
        total += poly::eval(A, b - a);
    }
    return total;
}

} // namespace bsmod
