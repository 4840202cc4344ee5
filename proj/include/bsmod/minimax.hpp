#pragma once

// Best uniform approximation by trigonometric polynomials and the shared
// dense-LP minimax engine (epigraph formulation, primal simplex).

#include "bsmod/periodic.hpp"
#include "bsmod/report.hpp"
#include "bsmod/trigpoly.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace bsmod {

class DegenerateBasis : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One residual group of a linear minimax problem: contributes
/// weight * max_i | target(t_i) - sum_l coeff_l basis_l(t_i) |  to the objective.
struct MinimaxGroup {
    std::vector<std::function<double(double)>> basis; // one entry per coefficient
    std::function<double(double)> target;             // may be zero
    std::vector<double> grid;
    double weight = 1.0;
};

struct LinearMinimaxProblem {
    int num_coeffs = 0;
    std::vector<MinimaxGroup> groups;
};

struct MinimaxLPSolution {
    std::vector<double> coeffs;
    double objective = 0.0;               // discrete optimum
    std::vector<double> group_values;     // per-group discrete max residual
};

/// Solve the discretized problem exactly (dense two-phase simplex).
MinimaxLPSolution solve_minimax_lp(const LinearMinimaxProblem& p);

/// Operation-level wrapper: coefficients plus an enclosure of the discrete
/// objective (solver error model).
std::pair<std::vector<double>, CertifiedValue> solve_minimax(const LinearMinimaxProblem& p);

struct MinimaxSolution {
    TrigPoly approximant;
    CertifiedValue error;                       // encloses E_{n-1}(f)
    std::vector<std::pair<double, int>> extremal_points; // (t, residual sign)
    int iterations = 0;
};

struct MinimaxOptions {
    double tol = 1e-9;    // requested enclosure width for E_{n-1}
    int max_rounds = 8;   // extremal-point migration rounds
    int grid_factor = 64; // initial grid: max(grid_factor*n, 512)
};

/// E_{n-1}(f): best approximation by trigonometric polynomials of degree
/// <= n-1 with a certified two-sided enclosure.
MinimaxSolution best_approx(const PeriodicFunction& f, int n, const MinimaxOptions& opt = {});

/// E_{n-1}(g) <= ||D^2 g|| / (32 n^2) for twice differentiable g.
CheckReport favard_check(const PeriodicFunction& g, int n, double tol = 1e-7);

} // namespace bsmod
