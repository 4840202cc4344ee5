#include "bsmod/moduli.hpp"

#include "bsmod/bspline.hpp"
#include "bsmod/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>

namespace bsmod {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// generic certified supremum of a profile over (0, h]

struct ProfileOracle {
    std::function<double(double)> sample_lo;                  // attained value at u
    std::function<double(double, double)> interval_hi;        // sound upper bound over [ua, ub]
    std::function<double(double)> small_u_hi;                 // sound upper bound over (0, u1]
};

CertifiedValue profile_sup_1d(double h, const ProfileOracle& oracle, const ModuliOptions& opt, Method method) {
    const int n_geo = opt.samples / 2, n_uni = opt.samples - n_geo;
    std::vector<double> us;
    us.reserve(opt.samples + 2);
    double u_min = h * 1e-9;
    double ratio = std::pow(h / u_min, 1.0 / n_geo);
    double u = u_min;
    for (int i = 0; i < n_geo; ++i) {
        us.push_back(u);
        u *= ratio;
    }
    for (int i = 1; i <= n_uni; ++i) us.push_back(h * i / n_uni);
    std::sort(us.begin(), us.end());
    us.erase(std::unique(us.begin(), us.end()), us.end());

    std::vector<double> vals(us.size());
    double lo = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
        vals[i] = oracle.sample_lo(us[i]);
        lo = std::max(lo, vals[i]);
    }
    // parabolic refinement at the top candidates
    std::vector<std::size_t> idx(us.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + std::min<std::size_t>(5, idx.size()), idx.end(),
                      [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    for (std::size_t c = 0; c < std::min<std::size_t>(5, idx.size()); ++c) {
        std::size_t i = idx[c];
        if (i == 0 || i + 1 >= us.size()) continue;
        double x0 = us[i - 1], x1 = us[i], x2 = us[i + 1];
        double y0 = vals[i - 1], y1 = vals[i], y2 = vals[i + 1];
        double d1 = (y1 - y0) / (x1 - x0), d2 = (y2 - y1) / (x2 - x1);
        double curv = (d2 - d1) / (x2 - x0);
        if (std::abs(curv) < 1e-300) continue;
        double vx = 0.5 * (x0 + x1) - 0.5 * d1 / curv;
        if (vx > 0.0 && vx <= h) lo = std::max(lo, oracle.sample_lo(vx));
    }

    struct Seg {
        double a, b, ub;
        bool operator<(const Seg& o) const { return ub < o.ub; }
    };
    std::priority_queue<Seg> pq;
    // coarse initial cover (the interval bound is the expensive part)
    {
        std::vector<double> cov;
        cov.push_back(us.front());
        double g = us.front();
        while (g < h) {
            g = std::min(h, std::max(g * 4.0, g + h / 16.0));
            cov.push_back(g);
        }
        for (std::size_t i = 0; i + 1 < cov.size(); ++i) pq.push({cov[i], cov[i + 1], oracle.interval_hi(cov[i], cov[i + 1])});
    }
    double hi_small = oracle.small_u_hi(us.front());
    double hi = std::max(lo, hi_small);
    long used = 0;
    int stalls = 0;
    while (!pq.empty()) {
        Seg s = pq.top();
        if (std::max(s.ub, hi_small) <= lo + opt.tol) {
            hi = std::max(std::max(s.ub, hi_small), lo);
            break;
        }
        pq.pop();
        hi = std::max({lo, s.ub, hi_small});
        if (hi_small > lo + opt.tol) {
            // push the small-u boundary down by shrinking u1
            double u1 = us.front() * 0.25;
            if (u1 < 1e-300)
                throw ToleranceNotMet("modulus supremum: small-u bound does not contract", CertifiedValue{lo, hi, method});
            pq.push({u1, us.front(), oracle.interval_hi(u1, us.front())});
            us.insert(us.begin(), u1);
            double next_small = oracle.small_u_hi(u1);
            if (next_small > hi_small - 1e-18 && ++stalls > 600)
                throw ToleranceNotMet("modulus supremum: small-u bound does not contract", CertifiedValue{lo, hi, method});
            hi_small = next_small;
            pq.push(s);
            continue;
        }
        if (++used > opt.budget)
            throw ToleranceNotMet("modulus supremum: refinement budget exhausted", CertifiedValue{lo, hi, method});
        double mid = 0.5 * (s.a + s.b);
        lo = std::max(lo, oracle.sample_lo(mid));
        Seg l{s.a, mid, oracle.interval_hi(s.a, mid)};
        Seg r{mid, s.b, oracle.interval_hi(mid, s.b)};
        if (std::max(l.ub, r.ub) > s.ub - 1e-18) {
            if (++stalls > 2000)
                throw ToleranceNotMet("modulus supremum: interval bound does not contract", CertifiedValue{lo, std::max(hi, lo), method});
        }
        pq.push(l);
        pq.push(r);
    }
    if (pq.empty()) hi = std::max(lo, hi_small);
    return {lo, std::max(hi, lo), method};
}

// ---------------------------------------------------------------------------
// trig profiles: gamma_j(u) = alpha_j * g(j, u), profile(u) = ||G_u||.
// Envelope bound over [a,b]: with s the center and r the radius,
//   ||G_u|| <= max(||G_s + r G'_s||, ||G_s - r G'_s||) + r^2/2 * sum|alpha_j| C2_j.

struct TrigProfile {
    const TrigPoly* f;
    std::function<double(int, double)> mult;        // g(j, u)
    std::function<double(int, double)> mult_du;     // dg/du
    std::function<double(int)> mult_d2_bound;       // sup_u |d2g/du2|
    double sup_tol;

    double c2_total() const {
        double s = 0.0;
        for (int j = 1; j <= f->size(); ++j)
            s += (std::abs(f->cos_coeff(j)) + std::abs(f->sin_coeff(j))) * mult_d2_bound(j);
        return s;
    }
    double value_hi(double u) const { return f->filtered([&](int j) { return j == 0 ? 0.0 : mult(j, u); }).sup_norm(sup_tol).hi; }
    double value_lo(double u) const { return f->filtered([&](int j) { return j == 0 ? 0.0 : mult(j, u); }).sup_norm(sup_tol).lo; }
    double interval_hi(double a, double b) const {
        double s = 0.5 * (a + b), r = 0.5 * (b - a);
        TrigPoly G = f->filtered([&](int j) { return j == 0 ? 0.0 : mult(j, s); });
        TrigPoly dG = f->filtered([&](int j) { return j == 0 ? 0.0 : mult_du(j, s); });
        double up = std::max((G + dG.scaled(r)).sup_norm(sup_tol).hi, (G - dG.scaled(r)).sup_norm(sup_tol).hi);
        return up + 0.5 * r * r * c2_total();
    }
};

// |d/dx sinc| <= 1/2, |d2/dx2 sinc| <= 1/3
double sinc_prime(double x) {
    if (std::abs(x) < 1e-4) return -x / 3.0 + x * x * x / 30.0;
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}

// ---------------------------------------------------------------------------
// jump-structured functions: f = (step wave of amplitude A, jumps at
// equispaced alternating positions) + continuous part c.

struct JumpStructure {
    std::vector<double> taus; // jump positions, sorted, size 2n
    double gap;               // spacing between consecutive jumps
    double amplitude;         // A: step levels are +-A
    std::vector<double> level; // level on (taus[i], taus[i+1]), size 2n (wraps)
    PeriodicFunction step;    // the alternating step wave
    PeriodicFunction cont;    // f - step  (continuous)
    double lip_c;             // Lipschitz bound of cont
};

std::optional<JumpStructure> detect_jump_structure(const PeriodicFunction& f) {
    if (f.has_closure() || !f.has_piecewise()) return std::nullopt;
    auto js = f.piecewise().jumps(1e-9);
    if (js.size() < 2 || js.size() % 2 != 0) return std::nullopt;
    double J = std::abs(js[0].size);
    double gap = 0.0;
    for (std::size_t i = 0; i < js.size(); ++i) {
        if (std::abs(std::abs(js[i].size) - J) > 1e-9 * (1.0 + J)) return std::nullopt;
        if (js[i].size * js[(i + 1) % js.size()].size > 0.0) return std::nullopt; // must alternate
        double g = (i + 1 < js.size()) ? js[i + 1].t - js[i].t : js[0].t + 1.0 - js[i].t;
        if (i == 0) gap = g;
        else if (std::abs(g - gap) > 1e-9) return std::nullopt;
    }
    JumpStructure S;
    S.gap = gap;
    S.amplitude = 0.5 * J;
    for (const auto& j : js) S.taus.push_back(j.t);
    // build the step wave: level after jump i is level before + size
    std::vector<double> bp;
    std::vector<poly::Coeffs> coef;
    double lvl = js[0].size > 0 ? S.amplitude : -S.amplitude;
    // start at taus[0]
    std::vector<double> levels(js.size());
    for (std::size_t i = 0; i < js.size(); ++i) {
        levels[i] = lvl;
        lvl = -lvl;
    }
    S.level = levels;
    // assemble as PiecewisePoly with breakpoint 0 first
    if (S.taus.front() > 0.0) {
        bp.push_back(0.0);
        coef.push_back({levels.back()});
    }
    for (std::size_t i = 0; i < S.taus.size(); ++i) {
        bp.push_back(S.taus[i]);
        coef.push_back({levels[i]});
    }
    PiecewisePoly step(bp, coef, -1);
    S.step = PeriodicFunction::from_piecewise(step);
    S.cont = f - S.step;
    if (!S.cont.piecewise().jumps(1e-7).empty()) return std::nullopt;
    S.lip_c = S.cont.lipschitz_bound();
    return S;
}

// tail-mass function of chi_1^k beyond z (one side), as an exact piecewise
// polynomial; M(z) = 0 for z >= k/2, M(0) = 1/2
struct TailMass {
    CompactKernel unit;
    double max_density;
    explicit TailMass(int k) : unit(BSplineKernel(1.0, k).piecewise()) { max_density = unit.eval(0.0); }
    double operator()(double z) const {
        if (z <= 0.0) return 1.0 - unit.tail_mass(-z); // by symmetry of chi_1^k
        return unit.tail_mass(z);
    }
};

} // namespace

// ---------------------------------------------------------------------------

CertifiedValue w2(const PeriodicFunction& f, double h, int k, const ModuliOptions& opt) {
    if (!(h > 0.0)) throw std::invalid_argument("w2: h > 0 required");
    BSplineKernel ker(h, k);
    PeriodicFunction conv = convolve(f, ker);
    CertifiedValue v = sup_norm_diff(f, conv, std::min(opt.tol, 1e-10));
    return v;
}

namespace {

// full W2*(f, ., k) for a jump-structured f by joint (t,u) branch and bound
CertifiedValue w2_star_jump(const PeriodicFunction& f, const JumpStructure& S, double h, int k,
                            const ModuliOptions& opt) {
    TailMass M(k);
    const double A = S.amplitude;
    const double g = S.gap;
    // validity of the two-sided ladder requires the window to stay within the
    // two neighbouring plateaus of each side's ladder start; the alternating
    // ladder sum handles any u <= h as long as jumps are equispaced.
    auto jump_dev_upper = [&](double dmin_l, double dmin_r, double umax) {
        return 2.0 * A * (M(dmin_l / umax) + M(dmin_r / umax));
    };
    auto jump_dev_exact = [&](double dl, double dr, double u) {
        // alternating ladder on both sides
        double FL = 0.0, FR = 0.0, sgn = 1.0;
        for (int m = 0; m < 64; ++m) {
            double zl = (dl + m * g) / u, zr = (dr + m * g) / u;
            if (zl >= 0.5 * k && zr >= 0.5 * k) break;
            FL += sgn * M(zl);
            FR += sgn * M(zr);
            sgn = -sgn;
        }
        return 2.0 * A * (FL + FR); // |sigma - sigma * chi_u^k| at distance (dl, dr), sign = level sign
    };

    // continuous-part deviation at scale u, recomputed lazily per u
    std::map<double, PiecewisePoly> dev_cache;
    auto dev_c = [&](double u) -> const PiecewisePoly& {
        auto it = dev_cache.find(u);
        if (it != dev_cache.end()) return it->second;
        PeriodicFunction cv = convolve(S.cont, BSplineKernel(u, k));
        PeriodicFunction d = S.cont - cv;
        PiecewisePoly dp = d.has_piecewise() ? d.piecewise() : PiecewisePoly::constant(0.0);
        if (d.has_trig() && d.trig().degree() > 0)
            throw std::logic_error("w2_star_jump: unexpected trig remainder");
        if (d.has_trig()) dp = dp + PiecewisePoly::constant(d.trig().constant_term());
        if (dev_cache.size() > 48) dev_cache.clear();
        return dev_cache.emplace(u, std::move(dp)).first->second;
    };
    const double Lc_u = 0.75 * k * S.lip_c;      // u-modulus of ||c - c*chi_u^k||
    const double Lc_t = 2.0 * S.lip_c;           // t-modulus of the same
    const double chi_max = M.max_density;
    const double cap = 2.0 * f.sup_norm(1e-9).hi;

    // sample-based lower bound (exact full evaluations)
    double lo = 0.0;
    {
        std::vector<double> us;
        for (int i = 1; i <= 24; ++i) us.push_back(h * i / 24.0);
        double u = h * 1e-6;
        while (u < h) {
            us.push_back(u);
            u *= 4.0;
        }
        for (double uu : us) lo = std::max(lo, w2(f, uu, k, opt).lo);
    }

    // rects: [t1,t2] within one plateau x [ua,ub]
    struct Rect {
        double t1, t2, ua, ub, ub_bound;
        int plateau;
        bool operator<(const Rect& o) const { return ub_bound < o.ub_bound; }
    };
    const std::size_t P = S.taus.size();
    auto plateau_lr = [&](int p) {
        double a = S.taus[p];
        double b = (static_cast<std::size_t>(p) + 1 < P) ? S.taus[p + 1] : S.taus[0] + 1.0;
        return std::pair<double, double>(a, b);
    };
    auto rect_bound = [&](Rect& R) {
        auto [pa, pb] = plateau_lr(R.plateau);
        double dl1 = R.t1 - pa, dr2 = pb - R.t2; // min distances within the rect
        const PiecewisePoly& D = dev_c(R.ub);
        double uspan = R.ub - R.ua;
        double csup = D.sup_on(R.t1, std::max(R.t2, R.t1 + 1e-15)).hi + Lc_u * uspan;
        double tri = jump_dev_upper(dl1, dr2, R.ub) + csup;
        // signed center bound (sigma part evaluated at ub, c part at (tc, ub))
        double tc = 0.5 * (R.t1 + R.t2);
        double rt = 0.5 * (R.t2 - R.t1);
        double sgn = S.level[R.plateau] >= 0 ? 1.0 : -1.0;
        double sig = sgn * jump_dev_exact(tc - pa, pb - tc, R.ub);
        double cen = std::abs(sig + D.eval(tc));
        double Lt_sig = 2.0 * A * 4.0 * chi_max / R.ua;
        double Lu_sig = 2.0 * A * 4.0 * chi_max * (0.5 * k) / R.ua;
        double signed_b = cen + rt * (Lt_sig + Lc_t) + uspan * (Lu_sig + Lc_u);
        R.ub_bound = std::min(std::min(tri, signed_b), cap);
    };

    std::priority_queue<Rect> pq;
    double u_lo_init = std::min(h, 1e-4 / std::max(1.0, S.lip_c) / k);
    // (0, u_lo_init]: step transitions contribute at most 2A (1/2 + M(g/u)),
    // the continuous part at most (k u / 2) Lip
    auto small_bound = [&](double u1) { return 2.0 * A * (0.5 + M(g / u1)) + 0.5 * k * u1 * S.lip_c; };
    double small_cap = small_bound(u_lo_init);
    // u slabs
    {
        std::vector<double> uslab;
        uslab.push_back(u_lo_init);
        double u = u_lo_init;
        while (u < h) {
            u = std::min(h, std::max(2.0 * u, u + h / 8.0));
            uslab.push_back(u);
        }
        for (std::size_t si = 0; si + 1 < uslab.size(); ++si) {
            for (std::size_t p = 0; p < P; ++p) {
                auto [pa, pb] = plateau_lr(static_cast<int>(p));
                int tparts = 4;
                for (int tp = 0; tp < tparts; ++tp) {
                    Rect R{pa + (pb - pa) * tp / tparts, pa + (pb - pa) * (tp + 1) / tparts,
                           uslab[si], uslab[si + 1], 0.0, static_cast<int>(p)};
                    rect_bound(R);
                    pq.push(R);
                }
            }
        }
    }

    double hi = std::max(lo, small_cap);
    long used = 0;
    while (!pq.empty()) {
        Rect R = pq.top();
        double cur = std::max(R.ub_bound, small_cap);
        hi = std::max(lo, cur);
        if (cur <= lo + opt.tol) break;
        pq.pop();
        if (small_cap > lo + opt.tol) {
            // shrink the small-u region
            double u_new = u_lo_init * 0.5;
            if (u_new < 1e-300) break;
            for (std::size_t p = 0; p < P; ++p) {
                auto [pa, pb] = plateau_lr(static_cast<int>(p));
                Rect R2{pa, pb, u_new, u_lo_init, 0.0, static_cast<int>(p)};
                rect_bound(R2);
                pq.push(R2);
            }
            u_lo_init = u_new;
            small_cap = small_bound(u_lo_init);
            pq.push(R);
            continue;
        }
        if (++used > opt.budget)
            throw ToleranceNotMet("w2_star: jump branch-and-bound budget exhausted", CertifiedValue{lo, hi, Method::grid_refine});
        // split the dominating direction
        double tspan = R.t2 - R.t1, uspan = R.ub - R.ua;
        double Lt_sig = 2.0 * A * 4.0 * chi_max / R.ua;
        bool split_t = tspan * (Lt_sig + Lc_t) > uspan * (Lt_sig * 0.5 * k + 2.0 * Lc_u);
        if (split_t) {
            double tm = 0.5 * (R.t1 + R.t2);
            Rect a{R.t1, tm, R.ua, R.ub, 0.0, R.plateau}, b{tm, R.t2, R.ua, R.ub, 0.0, R.plateau};
            rect_bound(a);
            rect_bound(b);
            pq.push(a);
            pq.push(b);
        } else {
            double um = 0.5 * (R.ua + R.ub);
            Rect a{R.t1, R.t2, R.ua, um, 0.0, R.plateau}, b{R.t1, R.t2, um, R.ub, 0.0, R.plateau};
            rect_bound(a);
            rect_bound(b);
            pq.push(a);
            pq.push(b);
        }
        // lo refresh from the exact value at the rect's u
        if ((used & 63) == 0) lo = std::max(lo, w2(f, R.ub, k, opt).lo);
    }
    if (pq.empty()) hi = std::max(lo, small_cap);
    return {lo, std::max(hi, lo), Method::grid_refine};
}

} // namespace

CertifiedValue w2_star(const PeriodicFunction& f, double h, int k, const ModuliOptions& opt) {
    if (!(h > 0.0)) throw std::invalid_argument("w2_star: h > 0 required");
    const double cap = 2.0 * f.sup_norm(1e-9).hi;

    CertifiedValue out{0.0, 0.0, Method::grid_refine};
    bool have = false;
    if (f.is_exact() && f.has_piecewise() && !f.piecewise().jumps(1e-9).empty()) {
        auto S = detect_jump_structure(f);
        if (S) {
            out = w2_star_jump(f, *S, h, k, opt);
            have = true;
        } else {
            // unstructured discontinuity: sound but loose cover via the
            // L1-dilation modulus 2k||f||/u
            double nrm = f.sup_norm(1e-9).hi;
            ProfileOracle O;
            O.sample_lo = [&](double u) { return w2(f, u, k, opt).lo; };
            O.interval_hi = [&, nrm](double a, double b) { return w2(f, b, k, opt).hi + 2.0 * k * nrm * (b - a) / b; };
            O.small_u_hi = [&, nrm](double) { return cap; };
            out = profile_sup_1d(h, O, opt, Method::grid_refine);
            have = true;
        }
    }
    if (!have && f.has_trig() && !f.has_piecewise() && !f.has_closure()) {
        TrigProfile TP;
        TP.f = &f.trig();
        TP.sup_tol = opt.tol / 8.0;
        TP.mult = [k](int j, double u) { return 1.0 - std::pow(sinc(kPi * j * u), k); };
        TP.mult_du = [k](int j, double u) {
            double x = kPi * j * u;
            return -static_cast<double>(k) * std::pow(sinc(x), k - 1) * sinc_prime(x) * kPi * j;
        };
        TP.mult_d2_bound = [k](int j) {
            double c2 = k * (k - 1) / 4.0 + k / 3.0;
            return kPi * j * kPi * j * c2;
        };
        ProfileOracle O;
        O.sample_lo = [&](double u) { return TP.value_lo(u); };
        O.interval_hi = [&](double a, double b) { return TP.interval_hi(a, b); };
        O.small_u_hi = [&](double u1) {
            // W2(f, chi_u^k) <= c_k(u) ||D2 f|| for smooth f
            return BSplineKernel(u1, k).second_moment_constant() * f.trig().deriv_abs_sum(2);
        };
        out = profile_sup_1d(h, O, opt, Method::grid_refine);
        have = true;
    }
    if (!have) {
        // continuous piecewise (possibly plus trig) or closure-backed: Lipschitz modulus in u
        double L = f.lipschitz_bound();
        double Lu = 0.75 * k * L;
        ProfileOracle O;
        O.sample_lo = [&](double u) { return w2(f, u, k, opt).lo; };
        O.interval_hi = [&, Lu](double a, double b) { return w2(f, b, k, opt).hi + Lu * (b - a); };
        O.small_u_hi = [&, L](double u1) { return 0.5 * k * u1 * L; };
        out = profile_sup_1d(h, O, opt, Method::grid_refine);
    }
    if (out.hi > cap) out.hi = std::max(out.lo, cap);
    return out;
}

CertifiedValue omega2(const PeriodicFunction& f, double h, const ModuliOptions& opt) {
    if (!(h > 0.0)) throw std::invalid_argument("omega2: h > 0 required");
    const double cap = 4.0 * f.sup_norm(1e-9).hi;

    CertifiedValue out{0.0, 0.0, Method::grid_refine};
    bool have = false;
    if (f.has_trig() && !f.has_piecewise() && !f.has_closure()) {
        TrigProfile TP;
        TP.f = &f.trig();
        TP.sup_tol = opt.tol / 8.0;
        TP.mult = [](int j, double u) { return 2.0 * std::cos(2.0 * kPi * j * u) - 2.0; };
        TP.mult_du = [](int j, double u) { return -4.0 * kPi * j * std::sin(2.0 * kPi * j * u); };
        TP.mult_d2_bound = [](int j) { return 8.0 * kPi * kPi * j * j; };
        ProfileOracle O;
        O.sample_lo = [&](double u) { return TP.value_lo(u); };
        O.interval_hi = [&](double a, double b) { return TP.interval_hi(a, b); };
        O.small_u_hi = [&](double u1) { return u1 * u1 * f.trig().deriv_abs_sum(2); };
        out = profile_sup_1d(h, O, opt, Method::grid_refine);
        have = true;
    }
    if (!have && f.is_exact() && f.has_piecewise() && !f.piecewise().jumps(1e-9).empty()) {
        auto S = detect_jump_structure(f);
        double nrm = f.sup_norm(1e-9).hi;
        ProfileOracle O;
        O.sample_lo = [&](double u) { return f.second_difference(u).sup_norm(1e-10).lo; };
        if (S) {
            // step part: || Delta_u^2 sigma || changes only when u crosses the
            // jump lattice; bound = step-part possibilities + continuous part
            const JumpStructure& J = *S;
            double Lc = 2.0 * J.lip_c;
            O.interval_hi = [&, Lc, J](double a, double b) {
                // continuous part at b plus modulus; step part bounded by its
                // exact sup at sampled u plus lattice-crossing allowance
                PeriodicFunction dc = J.cont.second_difference(b);
                double cpart = dc.sup_norm(1e-9).hi + Lc * (b - a);
                // step second difference takes values in {0,+-2A,+-4A}; which
                // occur depends on u: use exact evaluation at b and at a plus
                // the worst case when a lattice line is crossed inside [a,b]
                bool crosses = false;
                for (int m = 1; m <= 2 * static_cast<int>(J.taus.size()) + 2; ++m) {
                    double lat = 0.5 * m * J.gap;
                    if (lat > a - (b - a) && lat < b + (b - a)) { crosses = true; break; }
                    if (lat > b + (b - a)) break;
                }
                auto step_sup = [&](double u) { return J.step.second_difference(u).sup_norm(1e-9).hi; };
                double sp = crosses ? 4.0 * J.amplitude : std::max(step_sup(a), step_sup(b));
                return sp + cpart;
            };
            O.small_u_hi = [&, J](double u1) { return 2.0 * J.amplitude + 2.0 * u1 * J.lip_c; };
        } else {
            // no usable structure: the second difference of a general
            // discontinuous function has no u-modulus, so only the global cap
            // is sound over intervals
            O.interval_hi = [&, nrm](double, double) { return 4.0 * nrm; };
            O.small_u_hi = [&, nrm](double) { return 4.0 * nrm; };
        }
        out = profile_sup_1d(h, O, opt, Method::grid_refine);
        have = true;
    }
    if (!have) {
        double L = f.lipschitz_bound();
        ProfileOracle O;
        O.sample_lo = [&](double u) { return f.second_difference(u).sup_norm(1e-10).lo; };
        O.interval_hi = [&, L](double a, double b) { return f.second_difference(b).sup_norm(1e-10).hi + 2.0 * L * (b - a); };
        O.small_u_hi = [&, L](double u1) { return 2.0 * u1 * L; };
        out = profile_sup_1d(h, O, opt, Method::grid_refine);
    }
    if (out.hi > cap) out.hi = std::max(out.lo, cap);
    return out;
}

} // namespace bsmod
