#pragma once

#include "chebysolve/certify.hpp"
#include "chebysolve/extrema.hpp"

namespace cheby {

struct OracleOptions {
    int per_dim_univariate = 2001;
    int per_dim_bivariate = 200;
    long point_budget = 2'000'000;  // caps the grid for m >= 3
    int polish_top = 50;
    PolishOptions polish;
};

struct GlobalErrorResult {
    double value = 0.0;
    std::vector<Vec> argmax;
};

// Brute-force sup norm of the error magnitude: dense grid sweep, then local
// polish of the best grid maximizers. Not a certified bound; the grid
// density is the knob.
GlobalErrorResult global_error(const ErrorFunction& err, const BoxDomain& domain,
                               const OracleOptions& opt = {});

// One-sided difference quotients (m(a + t u) - m(a)) / t of a sup-norm
// functional m supplied by the caller.
std::vector<double> fd_directional(const std::function<double(const Vec&)>& m, const Vec& a,
                                   const Vec& u, const std::vector<double>& ts);

struct PerturbationAuditResult {
    bool pass = true;
    bool vacuous = false;
    int trials = 0;
    std::vector<Vec> witnesses;  // offending coefficient vectors
};

// Random-ball check of the certificate's growth claim. Lower bounds m(a')
// by the error at the certified signature support, which is exact enough on
// both sides: a genuine certificate makes the bound hold, a bogus one is
// falsified by any improving direction.
PerturbationAuditResult perturbation_audit(
    const std::function<double(const Vec&, const Vec&)>& error_at,  // (a, x) -> signed error
    const Signature& sig, const Vec& a, const KernelCertificate& cert, int trials, double radius,
    uint64_t seed = 0x5eed);

// Longest alternating-sign run of a univariate signature, entries sorted by x.
int alternation_count(const Signature& sig);

}  // namespace cheby
