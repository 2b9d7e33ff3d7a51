#pragma once

#include "chebysolve/certify.hpp"
#include "chebysolve/lp.hpp"
#include "chebysolve/newton.hpp"

namespace cheby {

struct CenterOptions {
    double dual_tol = 1e-8;
    double dedup_tol = 1e-6;
    double norm_tol = 1e-9;  // equality tolerance for the mixed signature branch
    PolishOptions polish;
    CertifyOptions certify;
};

struct CenterResult {
    LpSolution lp;
    Vec a;
    double error = 0.0;   // ||p - F||_inf over the polished extremes
    Signature signature;  // per the set-valued case split
    KernelCertificate certificate;
    bool shortcut_fired = false;  // duplicate extreme point with both signs
    bool strong = false;          // Levis check on the produced signature
    double half_gap = 0.0;        // 0.5 ||f^- - f^+||_inf over the grid (diagnostic)
    int n_active = 0;
};

// Relative Chebyshev center of the envelope pair (f^-, f^+): doubled-family
// LP, polish against whichever envelope attains each active constraint,
// set-valued signature, kernel certificate.
CenterResult solve_center(const SetValuedTarget& target, const MonomialBasis& basis,
                          const BoxDomain& domain, const std::vector<int>& grid_counts,
                          const CenterOptions& opt = {});

// Sufficient optimality when one extreme point carries both signs: phi(x)
// and -phi(x) are both subgradients, so lambda = (1/2, 1/2) on the pair.
std::optional<KernelCertificate> duplicate_point_shortcut(const Signature& sig,
                                                          const MonomialBasis& basis,
                                                          double point_tol = 1e-9);

// Strong uniqueness for centers: the Haar matrix of the signature support
// has full rank n and some strictly positive kernel vector exists (found by
// a small LP, which also covers kernels of dimension > 1).
bool levis_strong_check(const Signature& sig, const MonomialBasis& basis,
                        double rank_tol = 1e-10);

}  // namespace cheby
