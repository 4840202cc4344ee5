#pragma once

// The three moduli of continuity as certified enclosures:
//   omega2(f, h)       sup_{0<u<=h} || f(.+u) - 2f + f(.-u) ||
//   w2(f, h, k)        || f - f * chi_h^k ||
//   w2_star(f, h, k)   sup_{0<u<=h} w2(f, u, k)
//
// Certification of the u-suprema:
//   - trig parts use a directional envelope bound (value/derivative of the
//     multiplier at the interval center plus a curvature term),
//   - continuous piecewise parts use a Lipschitz modulus in u,
//   - discontinuous functions built on an alternating equispaced jump
//     skeleton (square wave plus continuous part) use a joint (t,u)
//     branch-and-bound with the smoothed-step profile handled in closed form.

#include "bsmod/periodic.hpp"

namespace bsmod {

struct ModuliOptions {
    double tol = 1e-8;   // absolute enclosure tolerance for the supremum
    int samples = 256;   // initial u samples (geometric then uniform)
    long budget = 400000;
};

CertifiedValue omega2(const PeriodicFunction& f, double h, const ModuliOptions& opt = {});
CertifiedValue w2(const PeriodicFunction& f, double h, int k, const ModuliOptions& opt = {});
CertifiedValue w2_star(const PeriodicFunction& f, double h, int k, const ModuliOptions& opt = {});

} // namespace bsmod
