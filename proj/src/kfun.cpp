#include "bsmod/kfun.hpp"

#include "bsmod/minimax.hpp"
#include "bsmod/moduli.hpp"
#include "bsmod/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bsmod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> base_grid(const PeriodicFunction& f, int N) {
    int G = std::max(16 * N, 192);
    std::vector<double> grid;
    grid.reserve(G + 8);
    for (int i = 0; i < G; ++i) grid.push_back(static_cast<double>(i) / G);
    for (const auto& j : f.jumps()) {
        grid.push_back(j.t - 1e-9 < 0 ? j.t - 1e-9 + 1.0 : j.t - 1e-9);
        grid.push_back(j.t + 1e-9);
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

TrigPoly trig_from(const std::vector<double>& c, int offset, int deg) {
    std::vector<double> ac(deg, 0.0), as(deg, 0.0);
    for (int j = 1; j <= deg; ++j) {
        ac[j - 1] = c[offset + 2 * j - 1];
        as[j - 1] = c[offset + 2 * j];
    }
    return TrigPoly(c[offset], std::move(ac), std::move(as));
}

/// basis entry l (layout a0, a1, b1, ...) evaluated with frequency factor
/// (2 pi j)^order and the derivative phase
double trig_basis_deriv(int l, int order, double t) {
    if (l == 0) return order == 0 ? 1.0 : 0.0;
    int j = (l + 1) / 2;
    bool is_cos = (l % 2 == 1);
    double w = std::pow(kTwoPi * j, order);
    double th = kTwoPi * j * t + 0.5 * std::numbers::pi * order; // derivative phase shift
    return is_cos ? w * std::cos(th) : w * std::sin(th);
}

void add_extrema(std::vector<double>& grid, const std::function<double(double)>& r, double floor) {
    const int F = 4096;
    double prev = std::abs(r(-1.0 / F)), cur = std::abs(r(0.0));
    for (int i = 0; i < F; ++i) {
        double next = std::abs(r(static_cast<double>(i + 1) / F));
        if (cur >= prev && cur >= next && cur > floor) grid.push_back(static_cast<double>(i) / F);
        prev = cur;
        cur = next;
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());
}

CertifiedValue certified_objective_k2(const PeriodicFunction& f, const TrigPoly& g, double h) {
    CertifiedValue a = sup_norm_diff(f, PeriodicFunction::from_trig(g), 1e-11);
    CertifiedValue b = g.derivative(2).sup_norm(1e-11).scaled(h * h);
    return a + b;
}

KFunEstimate k2_once(const PeriodicFunction& f, double h, int N) {
    std::vector<double> grid = base_grid(f, N);
    const int nc = 2 * N + 1;
    KFunEstimate best;
    best.degree = N;
    best.value = CertifiedValue{0.0, std::numeric_limits<double>::infinity(), Method::solver};
    for (int round = 0; round < 4; ++round) {
        LinearMinimaxProblem P;
        P.num_coeffs = nc;
        MinimaxGroup g0;
        g0.grid = grid;
        g0.weight = 1.0;
        g0.target = [&f](double t) { return f(t); };
        for (int l = 0; l < nc; ++l) g0.basis.push_back([l](double t) { return trig_basis_deriv(l, 0, t); });
        MinimaxGroup g2;
        g2.grid = grid;
        g2.weight = h * h;
        g2.target = nullptr;
        for (int l = 0; l < nc; ++l) g2.basis.push_back([l](double t) { return trig_basis_deriv(l, 2, t); });
        P.groups.push_back(std::move(g0));
        P.groups.push_back(std::move(g2));
        MinimaxLPSolution s = solve_minimax_lp(P);
        TrigPoly gt = trig_from(s.coeffs, 0, N);
        CertifiedValue v = certified_objective_k2(f, gt, h);
        if (v.hi < best.value.hi) {
            best.value = v;
            best.certificate = PeriodicFunction::from_trig(gt);
        }
        double discrete = s.objective;
        if (v.hi - discrete <= 1e-7 * (1.0 + v.hi)) break;
        PeriodicFunction rf = f - PeriodicFunction::from_trig(gt);
        TrigPoly d2 = gt.derivative(2);
        add_extrema(grid, [&](double t) { return rf(t); }, 0.25 * s.group_values[0]);
        add_extrema(grid, [&](double t) { return d2.eval(t); }, 0.25 * s.group_values[1]);
    }
    return best;
}

} // namespace

int default_kfun_degree(const PeriodicFunction& f) {
    if (f.has_trig() && !f.has_piecewise() && !f.has_closure()) return 4 * f.trig().degree() + 8;
    return 32;
}

KFunEstimate k2_estimate(const PeriodicFunction& f, double h, int degree) {
    if (!(h > 0.0)) throw std::invalid_argument("k2_estimate: h > 0 required");
    int N = degree >= 0 ? degree : default_kfun_degree(f);
    KFunEstimate a = k2_once(f, h, N);
    KFunEstimate b = k2_once(f, h, 2 * N);
    KFunEstimate out = (b.value.hi <= a.value.hi) ? b : a;
    out.degree = N;
    out.converged = std::abs(b.value.hi - a.value.hi) < 1e-6 * (1.0 + std::abs(a.value.hi));
    return out;
}

namespace {

KFunEstimate ktilde2_once(const PeriodicFunction& f, double h1, double h2, int N) {
    std::vector<double> grid = base_grid(f, N);
    const int nc1 = 2 * N + 1, nc = 2 * nc1;
    KFunEstimate best;
    best.degree = N;
    best.value = CertifiedValue{0.0, std::numeric_limits<double>::infinity(), Method::solver};
    for (int round = 0; round < 4; ++round) {
        LinearMinimaxProblem P;
        P.num_coeffs = nc;
        // group 0: f - g1
        MinimaxGroup g0;
        g0.grid = grid;
        g0.weight = 1.0;
        g0.target = [&f](double t) { return f(t); };
        for (int l = 0; l < nc1; ++l) g0.basis.push_back([l](double t) { return trig_basis_deriv(l, 0, t); });
        for (int l = 0; l < nc1; ++l) g0.basis.push_back([](double) { return 0.0; });
        // group 1: D(g1 - g2)
        MinimaxGroup g1;
        g1.grid = grid;
        g1.weight = h1;
        g1.target = nullptr;
        for (int l = 0; l < nc1; ++l) g1.basis.push_back([l](double t) { return trig_basis_deriv(l, 1, t); });
        for (int l = 0; l < nc1; ++l) g1.basis.push_back([l](double t) { return -trig_basis_deriv(l, 1, t); });
        // group 2: D^2 g2
        MinimaxGroup g2;
        g2.grid = grid;
        g2.weight = h2 * h2;
        g2.target = nullptr;
        for (int l = 0; l < nc1; ++l) g2.basis.push_back([](double) { return 0.0; });
        for (int l = 0; l < nc1; ++l) g2.basis.push_back([l](double t) { return trig_basis_deriv(l, 2, t); });
        P.groups.push_back(std::move(g0));
        P.groups.push_back(std::move(g1));
        P.groups.push_back(std::move(g2));
        MinimaxLPSolution s = solve_minimax_lp(P);
        TrigPoly t1 = trig_from(s.coeffs, 0, N), t2 = trig_from(s.coeffs, nc1, N);
        CertifiedValue v = sup_norm_diff(f, PeriodicFunction::from_trig(t1), 1e-11) +
                           (t1 - t2).derivative(1).sup_norm(1e-11).scaled(h1) +
                           t2.derivative(2).sup_norm(1e-11).scaled(h2 * h2);
        if (v.hi < best.value.hi) {
            best.value = v;
            best.certificate = PeriodicFunction::from_trig(t1);
            best.certificate2 = PeriodicFunction::from_trig(t2);
        }
        if (v.hi - s.objective <= 1e-7 * (1.0 + v.hi)) break;
        PeriodicFunction rf = f - PeriodicFunction::from_trig(t1);
        TrigPoly d1 = (t1 - t2).derivative(1);
        TrigPoly d2 = t2.derivative(2);
        add_extrema(grid, [&](double t) { return rf(t); }, 0.25 * s.group_values[0]);
        add_extrema(grid, [&](double t) { return d1.eval(t); }, 0.25 * s.group_values[1]);
        add_extrema(grid, [&](double t) { return d2.eval(t); }, 0.25 * s.group_values[2]);
    }
    return best;
}

} // namespace

KFunEstimate ktilde2_estimate(const PeriodicFunction& f, double h1, double h2, int degree) {
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw std::invalid_argument("ktilde2_estimate: h1, h2 > 0 required");
    int N = degree >= 0 ? degree : default_kfun_degree(f);
    KFunEstimate a = ktilde2_once(f, h1, h2, N);
    KFunEstimate b = ktilde2_once(f, h1, h2, 2 * N);
    KFunEstimate out = (b.value.hi <= a.value.hi) ? b : a;
    out.degree = N;
    out.converged = std::abs(b.value.hi - a.value.hi) < 1e-6 * (1.0 + std::abs(a.value.hi));
    return out;
}

KFunEstimate k2_construction_certificate(const PeriodicFunction& f, double h, CertificateVariant variant) {
    if (!(h > 0.0)) throw std::invalid_argument("k2_construction_certificate: h > 0 required");
    KFunEstimate out;
    out.degree = 0;
    out.converged = true;
    if (variant == CertificateVariant::tau_k2) {
        PeriodicFunction g = construction_g(f, h);
        // ||D^2 g|| = (12/h^2) ||f - f*chi_h^2||, so the h^2/24 term is W2/2
        CertifiedValue d2term = w2(f, h, 2).scaled(0.5);
        out.value = sup_norm_diff(f, g, 1e-11) + d2term;
        out.certificate = std::move(g);
    } else {
        auto [g1, g2] = construction_g1_g2(f, h);
        // ||D^2 g2|| = (24/h^2) ||f - f*chi_h||, so the h^2/48 term is W2/2
        CertifiedValue d2term = w2(f, h, 1).scaled(0.5);
        out.value = sup_norm_diff(f, g1, 1e-11) + sup_norm_diff(g1, g2, 1e-11) + d2term;
        out.certificate = std::move(g1);
        out.certificate2 = std::move(g2);
    }
    return out;
}

KFunEstimate ktilde2_construction_certificate(const PeriodicFunction& f, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("ktilde2_construction_certificate: h > 0 required");
    auto [g1, g2] = construction_g1_g2(f, h);
    CertifiedValue dterm = (g1 - g2).derivative(1).sup_norm(1e-11).scaled(h / 8.0);
    CertifiedValue d2term = w2(f, h, 1).scaled(0.5);
    KFunEstimate out;
    out.value = sup_norm_diff(f, g1, 1e-11) + dterm + d2term;
    out.certificate = std::move(g1);
    out.certificate2 = std::move(g2);
    out.degree = 0;
    out.converged = true;
    return out;
}

} // namespace bsmod
