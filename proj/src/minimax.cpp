#include "bsmod/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bsmod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dense two-phase primal simplex for  max c^T x  s.t.  Ax <= b, x >= 0.
// Entering column by most-negative reduced cost with index tie-breaking,
// ratio test with Bland-style tie-breaking; this combination has been robust
// on all the epigraph instances here.
class SimplexLP {
public:
    SimplexLP(const std::vector<std::vector<double>>& A, const std::vector<double>& b, const std::vector<double>& c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())), N_(n_ + 1), B_(m_),
          D_(m_ + 2, std::vector<double>(n_ + 2)) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) D_[i][j] = A[i][j];
        for (int i = 0; i < m_; ++i) {
            B_[i] = n_ + i;
            D_[i][n_] = -1.0;
            D_[i][n_ + 1] = b[i];
        }
        for (int j = 0; j < n_; ++j) {
            N_[j] = j;
            D_[m_][j] = -c[j];
        }
        N_[n_] = -1;
        D_[m_ + 1][n_] = 1.0;
    }

    /// returns +inf if unbounded, -inf if infeasible
    double solve(std::vector<double>& x) {
        int r = 0;
        for (int i = 1; i < m_; ++i)
            if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
        if (D_[r][n_ + 1] < -eps_) {
            pivot(r, n_);
            if (!simplex(2) || D_[m_ + 1][n_ + 1] < -eps_) return -std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i)
                if (B_[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n_; ++j)
                        if (std::make_pair(D_[i][j], N_[j]) < std::make_pair(D_[i][s], N_[s])) s = j;
                    pivot(i, s);
                }
        }
        bool ok = simplex(1);
        x.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (B_[i] < n_) x[B_[i]] = D_[i][n_ + 1];
        return ok ? D_[m_][n_ + 1] : std::numeric_limits<double>::infinity();
    }

private:
    int m_, n_;
    std::vector<int> N_, B_;
    std::vector<std::vector<double>> D_;
    const double eps_ = 1e-9;

    void pivot(int r, int s) {
        double* a = D_[r].data();
        double inv = 1.0 / a[s];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i != r && std::abs(D_[i][s]) > eps_) {
                double* bi = D_[i].data();
                double inv2 = bi[s] * inv;
                for (int j = 0; j < n_ + 2; ++j) bi[j] -= a[j] * inv2;
                bi[s] = a[s] * inv2;
            }
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) D_[r][j] *= inv;
        for (int i = 0; i < m_ + 2; ++i)
            if (i != r) D_[i][s] *= -inv;
        D_[r][s] = inv;
        std::swap(B_[r], N_[s]);
    }

    bool simplex(int phase) {
        int x = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (N_[j] == -phase) continue;
                if (s == -1 || std::make_pair(D_[x][j], N_[j]) < std::make_pair(D_[x][s], N_[s])) s = j;
            }
            if (D_[x][s] >= -eps_) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (D_[i][s] <= eps_) continue;
                if (r == -1 ||
                    std::make_pair(D_[i][n_ + 1] / D_[i][s], B_[i]) < std::make_pair(D_[r][n_ + 1] / D_[r][s], B_[r]))
                    r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }
};

} // namespace

MinimaxLPSolution solve_minimax_lp(const LinearMinimaxProblem& p) {
    if (p.num_coeffs < 0 || p.groups.empty()) throw std::invalid_argument("solve_minimax_lp: empty problem");
    const int nc = p.num_coeffs, ng = static_cast<int>(p.groups.size());
    // variables: c+ (nc), c- (nc), e_g (ng)
    const int nv = 2 * nc + ng;
    int rows = 0;
    for (const auto& g : p.groups) rows += 2 * static_cast<int>(g.grid.size());
    std::vector<std::vector<double>> A(rows, std::vector<double>(nv, 0.0));
    std::vector<double> b(rows, 0.0), c(nv, 0.0);
    for (int g = 0; g < ng; ++g) c[2 * nc + g] = -p.groups[g].weight; // maximize -sum w e
    int row = 0;
    for (int g = 0; g < ng; ++g) {
        const auto& G = p.groups[g];
        if (static_cast<int>(G.basis.size()) != nc) throw std::invalid_argument("solve_minimax_lp: basis size mismatch");
        for (double t : G.grid) {
            double tv = G.target ? G.target(t) : 0.0;
            // sum_l c_l B_l(t) - e_g <= target
            // -sum_l c_l B_l(t) - e_g <= -target
            for (int l = 0; l < nc; ++l) {
                double bv = G.basis[l](t);
                A[row][l] = bv;
                A[row][nc + l] = -bv;
                A[row + 1][l] = -bv;
                A[row + 1][nc + l] = bv;
            }
            A[row][2 * nc + g] = -1.0;
            A[row + 1][2 * nc + g] = -1.0;
            b[row] = tv;
            b[row + 1] = -tv;
            row += 2;
        }
    }
    SimplexLP lp(A, b, c);
    std::vector<double> x;
    double v = lp.solve(x);
    if (!std::isfinite(v)) throw DegenerateBasis("solve_minimax_lp: simplex reported an unbounded or infeasible system");
    MinimaxLPSolution sol;
    sol.coeffs.resize(nc);
    for (int l = 0; l < nc; ++l) sol.coeffs[l] = x[l] - x[nc + l];
    sol.objective = -v;
    sol.group_values.assign(ng, 0.0);
    for (int g = 0; g < ng; ++g) sol.group_values[g] = x[2 * nc + g];
    return sol;
}

std::pair<std::vector<double>, CertifiedValue> solve_minimax(const LinearMinimaxProblem& p) {
    MinimaxLPSolution s = solve_minimax_lp(p);
    double pad = 1e-9 * (1.0 + std::abs(s.objective));
    return {s.coeffs, CertifiedValue{std::max(0.0, s.objective - pad), s.objective + pad, Method::solver}};
}

namespace {

TrigPoly trig_from_coeffs(const std::vector<double>& c, int deg) {
    // layout: [a0, a1, b1, a2, b2, ...]
    std::vector<double> ac(deg, 0.0), as(deg, 0.0);
    for (int j = 1; j <= deg; ++j) {
        ac[j - 1] = c[2 * j - 1];
        as[j - 1] = c[2 * j];
    }
    return TrigPoly(c[0], std::move(ac), std::move(as));
}

std::vector<std::function<double(double)>> trig_basis(int deg) {
    std::vector<std::function<double(double)>> B;
    B.push_back([](double) { return 1.0; });
    for (int j = 1; j <= deg; ++j) {
        B.push_back([j](double t) { return std::cos(kTwoPi * j * t); });
        B.push_back([j](double t) { return std::sin(kTwoPi * j * t); });
    }
    return B;
}

} // namespace

MinimaxSolution best_approx(const PeriodicFunction& f, int n, const MinimaxOptions& opt) {
    if (n < 1) throw std::invalid_argument("best_approx: n >= 1 required");
    const int deg = n - 1;
    const int nc = 2 * deg + 1;

    std::vector<double> grid;
    {
        int G = std::max(opt.grid_factor * n, 512);
        grid.reserve(G + 8);
        for (int i = 0; i < G; ++i) grid.push_back(static_cast<double>(i) / G);
        for (const auto& j : f.jumps()) {
            grid.push_back(j.t - 1e-9 < 0 ? j.t - 1e-9 + 1.0 : j.t - 1e-9);
            grid.push_back(j.t + 1e-9);
        }
        std::sort(grid.begin(), grid.end());
    }

    MinimaxSolution out;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int round = 0; round < opt.max_rounds; ++round) {
        LinearMinimaxProblem P;
        P.num_coeffs = nc;
        MinimaxGroup g;
        g.basis = trig_basis(deg);
        g.target = [&f](double t) { return f(t); };
        g.grid = grid;
        g.weight = 1.0;
        P.groups.push_back(std::move(g));
        MinimaxLPSolution s = solve_minimax_lp(P);
        TrigPoly tau = trig_from_coeffs(s.coeffs, deg);
        CertifiedValue resid = sup_norm_diff(f, PeriodicFunction::from_trig(tau), std::min(1e-11, opt.tol));
        double round_lo = std::max(0.0, s.objective - 1e-9 * (1.0 + s.objective));
        lo = std::max(lo, round_lo);
        out.iterations = round + 1;
        if (resid.hi < hi) {
            hi = resid.hi;
            out.approximant = tau;
        }
        if (hi - lo <= opt.tol) break;
        // migrate: add the residual's local extrema to the grid
        PeriodicFunction r = f - PeriodicFunction::from_trig(tau);
        const int F = 8 * static_cast<int>(grid.size());
        std::vector<double> cand;
        double prev = std::abs(r(0.0)), cur = std::abs(r(1.0 / F));
        for (int i = 1; i + 1 <= F; ++i) {
            double next = std::abs(r(static_cast<double>(i + 1) / F));
            if (cur >= prev && cur >= next && cur > 0.5 * resid.lo) cand.push_back(static_cast<double>(i) / F);
            prev = cur;
            cur = next;
        }
        grid.insert(grid.end(), cand.begin(), cand.end());
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                   grid.end());
    }
    if (!(hi - lo <= opt.tol))
        throw ToleranceNotMet("best_approx: enclosure gap above tolerance after migration rounds",
                              CertifiedValue{lo, hi, Method::solver});
    out.error = CertifiedValue{lo, hi, Method::solver};

    // extremal points: residual extrema with alternating signs
    PeriodicFunction r = f - PeriodicFunction::from_trig(out.approximant);
    const int F = 4096;
    double prev = r(-1.0 / F), cur = r(0.0);
    for (int i = 0; i < F; ++i) {
        double next = r(static_cast<double>(i + 1) / F);
        if (std::abs(cur) >= std::abs(prev) && std::abs(cur) >= std::abs(next) && std::abs(cur) >= 0.95 * lo && lo > 0.0)
            out.extremal_points.push_back({static_cast<double>(i) / F, cur >= 0.0 ? 1 : -1});
        prev = cur;
        cur = next;
    }
    return out;
}

CheckReport favard_check(const PeriodicFunction& g, int n, double tol) {
    PeriodicFunction d2 = g.derivative(2);
    CertifiedValue rhs = d2.sup_norm(1e-10).scaled(1.0 / (32.0 * n * n));
    CertifiedValue lhs = best_approx(g, n).error;
    return CheckReport::compare("FAV", "Favard inequality E_{n-1}(g) <= ||D^2 g||/(32 n^2)",
                                {{"n", std::to_string(n)}}, lhs, rhs, tol);
}

} // namespace bsmod
