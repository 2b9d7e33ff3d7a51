#pragma once

#include <optional>

#include "chebysolve/center.hpp"
#include "chebysolve/newton.hpp"
#include "chebysolve/oracle.hpp"

namespace cheby {

struct PipelineOptions {
    std::vector<int> grid_counts;  // empty: 36 per dimension
    double dual_tol = 1e-8;
    double dedup_tol = 1e-6;
    NewtonOptions newton;
    CertifyOptions certify;
    OracleOptions oracle;
    PolishOptions polish;
    CenterOptions center;
    uint64_t seed = 0x5eed;
    int sharpness_samples = 100000;
    int kolmogorov_trials = 0;      // 0: skip the audit
    int perturbation_trials = 0;    // 0: skip the audit
    double perturbation_radius = 0.1;
    bool run_oracle = true;
};

enum class PipelineStatus { Certified, NotCertified, Failed };

struct PipelineResult {
    PipelineStatus status = PipelineStatus::Failed;
    std::string failure;

    LpSolution lp;
    int n_active = 0;
    std::vector<ExtremePoint> extremes;
    NewtonReport newton;
    Signature signature;
    KernelCertificate certificate;
    std::optional<VectorSignature> vector_signature;  // Horner runs
    GlobalErrorResult global;
    std::optional<KolmogorovAudit> kolmogorov;
    std::optional<PerturbationAuditResult> perturbation;

    double discrete_error = 0.0;
    double newton_error = 0.0;
    double global_error_value = 0.0;
};

// The two-step method end to end: discretized LP, active-index polish,
// signature and initial kernel vector, Newton refinement, kernel
// certificate, and a brute-force global-error audit.
PipelineResult solve_minimax(const Target& target, const MonomialBasis& basis,
                             const BoxDomain& domain, const PipelineOptions& opt = {});

// Certification of externally supplied coefficients: extremes are polished
// from a dense seed grid instead of LP duals.
PipelineResult certify_coefficients(const Target& target, const MonomialBasis& basis,
                                    const BoxDomain& domain, const Vec& a,
                                    const PipelineOptions& opt = {});

}  // namespace cheby
