#include "chebysolve/pipeline.hpp"

#include <cmath>

namespace cheby {

namespace {

std::vector<int> effective_counts(const PipelineOptions& opt, int m) {
    if (!opt.grid_counts.empty()) {
        if (static_cast<int>(opt.grid_counts.size()) == 1)
            return std::vector<int>(m, opt.grid_counts[0]);
        if (static_cast<int>(opt.grid_counts.size()) != m)
            throw SolverError(SolverError::Code::InvalidInput, "grid counts do not match m");
        return opt.grid_counts;
    }
    return std::vector<int>(m, 36);
}

Vec sample_values(const Target& target, const SampleGrid& grid) {
    Vec f(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        Vec x = grid.points.row(i);
        f[i] = std::visit(
            [&](const auto& t) -> double {
                using T = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<T, SetValuedTarget>)
                    throw SolverError(SolverError::Code::InvalidInput,
                                      "set-valued targets go through solve_center");
                else if constexpr (std::is_same_v<T, HornerTarget>)
                    return t.base.value(x);
                else
                    return t.value(x);
            },
            target);
    }
    return f;
}

ErrorFunction error_function_for(const Target& target, const MonomialBasis& basis, const Vec& a) {
    return std::visit(
        [&](const auto& t) -> ErrorFunction {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, SetValuedTarget>)
                throw SolverError(SolverError::Code::InvalidInput,
                                  "set-valued targets go through solve_center");
            else
                return make_error_function(t, basis, a);
        },
        target);
}

NewtonReport run_newton(const Target& target, const MonomialBasis& basis, const BoxDomain& domain,
                        const NewtonInit& init, const NewtonOptions& opt) {
    return std::visit(
        [&](const auto& t) -> NewtonReport {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ExplicitTarget>) {
                ExplicitKktSystem sys(t, basis, domain, init);
                return newton_solve(sys, opt);
            } else if constexpr (std::is_same_v<T, ImplicitTarget>) {
                ImplicitKktSystem sys(t, basis, domain, init);
                return newton_solve(sys, opt);
            } else if constexpr (std::is_same_v<T, HornerTarget>) {
                HornerKktSystem sys(t, basis, domain, init);
                return newton_solve(sys, opt);
            } else {
                throw SolverError(SolverError::Code::InvalidInput,
                                  "set-valued targets go through solve_center");
            }
        },
        target);
}

// Kernel init: subgradient columns at the polished extremes. Horner targets
// use the psi columns of the extended signature restricted to one entry per
// extreme (no zero components at a sane initial iterate).
Mat init_subgradients(const Target& target, const MonomialBasis& basis, const Vec& a,
                      const std::vector<ExtremePoint>& extremes,
                      std::optional<VectorSignature>& vector_sig_out) {
    if (const auto* horner = std::get_if<HornerTarget>(&target)) {
        VectorSignature vsig = extended_signature(*horner, basis, a, extremes);
        vector_sig_out = vsig;
        if (vsig.entries.size() != extremes.size())
            throw SolverError(SolverError::Code::InvalidInput,
                              "zero component error at the initial iterate");
        return subgradient_matrix(vsig, basis, *horner);
    }
    Signature sig = signature_of(extremes);
    return subgradient_matrix(sig, basis);
}

void finalize_certificate(PipelineResult& res, const Target& target, const MonomialBasis& basis,
                          const PipelineOptions& opt) {
    const auto& vars = res.newton.vars;
    if (const auto* horner = std::get_if<HornerTarget>(&target)) {
        VectorSignature vsig = extended_signature(*horner, basis, vars.a, vars.extremes);
        res.vector_signature = vsig;
        Mat s = subgradient_matrix(vsig, basis, *horner);
        res.certificate = certify(s, opt.certify);
        // scalar signature (signs of e_0) for reporting and audits
        res.signature = Signature{};
        for (const auto& p : vars.extremes) {
            Vec terms = horner->error_terms(basis, vars.a, p.x);
            res.signature.entries.push_back({p.x, terms[0] >= 0 ? +1 : -1, p.error});
            res.signature.norm_value = std::max(res.signature.norm_value, p.error);
        }
    } else {
        res.signature = signature_of(vars.extremes);
        Mat s = subgradient_matrix(res.signature, basis);
        res.certificate = certify(s, opt.certify);
        if (res.certificate.status == CertStatus::StronglyUnique) {
            res.certificate.r_hat =
                sharpness_estimate(s, opt.sharpness_samples, opt.seed);
        }
    }
}

void run_audits(PipelineResult& res, const Target& target, const MonomialBasis& basis,
                const BoxDomain& domain, const PipelineOptions& opt) {
    if (opt.run_oracle) {
        ErrorFunction err = error_function_for(target, basis, res.newton.vars.a);
        res.global = global_error(err, domain, opt.oracle);
        res.global_error_value = res.global.value;
    }
    if (opt.kolmogorov_trials > 0 && !res.signature.entries.empty()) {
        res.kolmogorov =
            kolmogorov_audit(res.signature, basis, opt.kolmogorov_trials, 1e-9, opt.seed);
    }
    if (opt.perturbation_trials > 0 && !res.signature.entries.empty() &&
        (res.certificate.status == CertStatus::Optimal ||
         res.certificate.status == CertStatus::StronglyUnique)) {
        auto error_at = [&](const Vec& a, const Vec& x) {
            ErrorFunction err = error_function_for(target, basis, a);
            return err.value(x);
        };
        res.perturbation =
            perturbation_audit(error_at, res.signature, res.newton.vars.a, res.certificate,
                               opt.perturbation_trials, opt.perturbation_radius, opt.seed);
    }
}

PipelineResult run_from_extremes(const Target& target, const MonomialBasis& basis,
                                 const BoxDomain& domain, const Vec& a0,
                                 std::vector<ExtremePoint> extremes, PipelineResult res,
                                 const PipelineOptions& opt) {
    res.extremes = extremes;
    std::optional<VectorSignature> init_vsig;
    Mat s0 = init_subgradients(target, basis, a0, extremes, init_vsig);
    Vec lambda0 = init_kernel(s0);

    NewtonInit init{a0, std::move(extremes), lambda0};
    res.newton = run_newton(target, basis, domain, init, opt.newton);
    res.newton_error = res.newton.extreme_error;
    if (!res.newton.converged) {
        res.status = PipelineStatus::Failed;
        res.failure = "newton: " + to_string(res.newton.failure);
        return res;
    }

    finalize_certificate(res, target, basis, opt);
    run_audits(res, target, basis, domain, opt);
    res.status = (res.certificate.status == CertStatus::Optimal ||
                  res.certificate.status == CertStatus::StronglyUnique)
                     ? PipelineStatus::Certified
                     : PipelineStatus::NotCertified;
    return res;
}

}  // namespace

PipelineResult solve_minimax(const Target& target, const MonomialBasis& basis,
                             const BoxDomain& domain, const PipelineOptions& opt) {
    PipelineResult res;
    SampleGrid grid = regular_grid(domain, effective_counts(opt, domain.dim()));
    Vec fvals = sample_values(target, grid);
    MinimaxLp lp = assemble_lp(basis, grid, fvals);
    res.lp = solve_lp(lp);
    if (res.lp.status != LpSolution::Status::Optimal) {
        res.failure = "lp: " + res.lp.message;
        return res;
    }
    res.discrete_error = res.lp.t;

    ActiveSet act = active_indices(lp, res.lp, opt.dual_tol);
    res.n_active = static_cast<int>(act.indices.size());
    if (!act.applicable) {
        res.failure = "degenerate problem: discrete error is zero (target in span)";
        return res;
    }

    ErrorFunction err = error_function_for(target, basis, res.lp.a);
    std::vector<ExtremePoint> extremes;
    for (const auto& idx : act.indices)
        extremes.push_back(polish_extreme(err, idx.x, domain, opt.polish));
    extremes = dedup(std::move(extremes), domain, opt.dedup_tol);

    return run_from_extremes(target, basis, domain, res.lp.a, std::move(extremes), std::move(res),
                             opt);
}

PipelineResult certify_coefficients(const Target& target, const MonomialBasis& basis,
                                    const BoxDomain& domain, const Vec& a,
                                    const PipelineOptions& opt) {
    PipelineResult res;
    ErrorFunction err = error_function_for(target, basis, a);
    GlobalErrorResult ge = global_error(err, domain, opt.oracle);

    // seed polish from every grid argmax and from near-norm local maxima
    std::vector<ExtremePoint> extremes;
    OracleOptions seed_opt = opt.oracle;
    SampleGrid grid = regular_grid(
        domain, std::vector<int>(domain.dim(),
                                 std::max(3, std::min(64, int(std::pow(2e5, 1.0 / domain.dim()))))));
    double norm = ge.value;
    for (int i = 0; i < grid.size(); ++i) {
        Vec x = grid.points.row(i);
        double mag = err.absolute ? std::abs(err.value(x)) : err.value(x);
        if (mag >= (1.0 - 1e-3) * norm) {
            try {
                extremes.push_back(polish_extreme(err, x, domain, opt.polish));
            } catch (const SolverError&) {
            }
        }
    }
    for (const auto& x : ge.argmax) extremes.push_back(polish_extreme(err, x, domain, opt.polish));
    extremes = dedup(std::move(extremes), domain, opt.dedup_tol);
    // keep only extremes attaining the norm
    std::erase_if(extremes, [&](const ExtremePoint& p) {
        double mag = err.absolute ? std::abs(p.error) : p.error;
        return mag < (1.0 - 1e-6) * norm;
    });
    if (extremes.empty()) {
        res.failure = "no extreme points at the sup norm";
        return res;
    }

    res.global = ge;
    res.global_error_value = ge.value;
    res.signature = signature_of(extremes);
    res.extremes = extremes;
    res.n_active = static_cast<int>(extremes.size());

    if (const auto* horner = std::get_if<HornerTarget>(&target)) {
        VectorSignature vsig = extended_signature(*horner, basis, a, extremes);
        res.vector_signature = vsig;
        res.certificate = certify(subgradient_matrix(vsig, basis, *horner), opt.certify);
    } else {
        Mat s = subgradient_matrix(res.signature, basis);
        res.certificate = certify(s, opt.certify);
        if (res.certificate.status == CertStatus::StronglyUnique)
            res.certificate.r_hat = sharpness_estimate(s, opt.sharpness_samples, opt.seed);
    }
    res.newton.vars.a = a;
    res.newton.vars.extremes = extremes;
    res.newton_error = res.signature.norm_value;

    run_audits(res, target, basis, domain, opt);
    res.status = (res.certificate.status == CertStatus::Optimal ||
                  res.certificate.status == CertStatus::StronglyUnique)
                     ? PipelineStatus::Certified
                     : PipelineStatus::NotCertified;
    return res;
}

}  // namespace cheby
