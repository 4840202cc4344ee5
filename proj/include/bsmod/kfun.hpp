#pragma once

// Upper estimates of the second Peetre K-functional
//   K2(f, h)          = inf_g { ||f - g|| + h^2 ||D^2 g|| }
// and the generalized three-term variant
//   Ktilde2(f, h1,h2) = inf_{g1,g2} { ||f - g1|| + h1 ||D(g1 - g2)|| + h2^2 ||D^2 g2|| },
// minimized over trigonometric polynomials of a given degree via the shared
// epigraph LP, plus the explicit smoothing-construction certificates.

#include "bsmod/periodic.hpp"

#include <optional>

namespace bsmod {

struct KFunEstimate {
    CertifiedValue value;                        // certified objective of the certificate (upper estimate)
    PeriodicFunction certificate;                // g (or g1)
    std::optional<PeriodicFunction> certificate2; // g2 for the generalized functional
    int degree = 0;                              // trig basis degree used (0 for construction certificates)
    bool converged = true;                       // degree-doubling stability flag
};

/// default basis degree: 4 deg(f) + 8 for trig input, 32 otherwise
int default_kfun_degree(const PeriodicFunction& f);

KFunEstimate k2_estimate(const PeriodicFunction& f, double h, int degree = -1);
KFunEstimate ktilde2_estimate(const PeriodicFunction& f, double h1, double h2, int degree = -1);

enum class CertificateVariant { tau_k2, g1g2_k1 };

/// The exact certificate value of the explicit construction (not an optimum):
///   tau_k2:  K2(f, h/(2 sqrt 6))  <= ||f - g||  + (h^2/24) ||D^2 g||
///   g1g2_k1: K2(f, h/(4 sqrt 3))  <= ||f - g1|| + ||g1 - g2|| + (h^2/48) ||D^2 g2||
KFunEstimate k2_construction_certificate(const PeriodicFunction& f, double h, CertificateVariant variant);

/// Ktilde2(f, h/8, h/(4 sqrt 3)) <= ||f - g1|| + (h/8)||D(g1-g2)|| + (h^2/48)||D^2 g2||
KFunEstimate ktilde2_construction_certificate(const PeriodicFunction& f, double h);

} // namespace bsmod
