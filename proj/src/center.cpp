#include "chebysolve/center.hpp"

#include <Eigen/SVD>

#include "chebysolve/simplex.hpp"

namespace cheby {

CenterResult solve_center(const SetValuedTarget& target, const MonomialBasis& basis,
                          const BoxDomain& domain, const std::vector<int>& grid_counts,
                          const CenterOptions& opt) {
    SampleGrid grid = regular_grid(domain, grid_counts);
    const int g = grid.size();
    Vec fminus(g), fplus(g);
    for (int i = 0; i < g; ++i) {
        Vec x = grid.points.row(i);
        fminus[i] = target.f_minus.value(x);
        fplus[i] = target.f_plus.value(x);
        if (fminus[i] > fplus[i] + 1e-12)
            throw SolverError(SolverError::Code::InvalidInput,
                              "solve_center: f_minus > f_plus at a grid point");
    }

    CenterResult out;
    out.half_gap = 0.5 * (fplus - fminus).cwiseAbs().maxCoeff();

    // identical envelopes collapse to the plain problem, same LP bit for bit
    const bool degenerate = (fminus - fplus).cwiseAbs().maxCoeff() == 0.0;
    MinimaxLp lp = degenerate ? assemble_lp(basis, grid, fminus)
                              : assemble_lp(basis, grid, fminus, fplus);
    out.lp = solve_lp(lp);
    if (out.lp.status != LpSolution::Status::Optimal)
        throw SolverError(SolverError::Code::NumericalFailure,
                          "solve_center: LP failed: " + out.lp.message);
    out.a = out.lp.a;

    ActiveSet act = active_indices(lp, out.lp, opt.dual_tol);
    out.n_active = static_cast<int>(act.indices.size());

    ErrorFunction err_minus = make_error_function(target.f_minus, basis, out.a);
    ErrorFunction err_plus = make_error_function(target.f_plus, basis, out.a);

    std::vector<ExtremePoint> ext_minus, ext_plus;
    for (const auto& idx : act.indices) {
        bool lower_family = degenerate || idx.family == TargetFamily::Lower;
        const ErrorFunction& err = lower_family ? err_minus : err_plus;
        ExtremePoint p = polish_extreme(err, idx.x, domain, opt.polish);
        p.family = lower_family ? TargetFamily::Lower : TargetFamily::Upper;
        (lower_family ? ext_minus : ext_plus).push_back(std::move(p));
    }
    ext_minus = dedup(std::move(ext_minus), domain, opt.dedup_tol);
    ext_plus = dedup(std::move(ext_plus), domain, opt.dedup_tol);

    if (degenerate) {
        out.signature = signature_of(ext_minus);
        for (auto& e : out.signature.entries) e.family = TargetFamily::Single;
    } else {
        out.signature = set_valued_signature(ext_minus, ext_plus, opt.norm_tol);
    }
    out.error = out.signature.norm_value;

    Mat s = subgradient_matrix(out.signature, basis);
    out.certificate = certify(s, opt.certify);
    if (auto shortcut = duplicate_point_shortcut(out.signature, basis)) {
        out.shortcut_fired = true;
        if (out.certificate.status != CertStatus::Optimal &&
            out.certificate.status != CertStatus::StronglyUnique)
            out.certificate = *shortcut;
    }
    out.strong = levis_strong_check(out.signature, basis);
    if (out.strong && out.certificate.status == CertStatus::Optimal)
        out.certificate.status = CertStatus::StronglyUnique;
    return out;
}

std::optional<KernelCertificate> duplicate_point_shortcut(const Signature& sig,
                                                          const MonomialBasis& basis,
                                                          double point_tol) {
    const int k = static_cast<int>(sig.entries.size());
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const auto& a = sig.entries[i];
            const auto& b = sig.entries[j];
            if (a.sign == b.sign) continue;
            if ((a.x - b.x).lpNorm<Eigen::Infinity>() > point_tol) continue;
            KernelCertificate cert;
            cert.status = CertStatus::Optimal;
            cert.k = k;
            cert.n = basis.size();
            cert.lambda = Vec::Zero(k);
            cert.lambda[i] = 0.5;
            cert.lambda[j] = 0.5;
            Mat s = subgradient_matrix(sig, basis);
            cert.residual = (s * cert.lambda).norm();
            Eigen::JacobiSVD<Mat> svd(s);
            const Vec& sv = svd.singularValues();
            for (int r = 0; r < sv.size(); ++r)
                if (sv[r] > 1e-10 * sv[0]) ++cert.rank;
            cert.kernel_dim = k - cert.rank;
            cert.note = "duplicate extreme point with both signs";
            return cert;
        }
    }
    return std::nullopt;
}

bool levis_strong_check(const Signature& sig, const MonomialBasis& basis, double rank_tol) {
    const int n = basis.size();
    const int k = static_cast<int>(sig.entries.size());
    if (k <= n) return false;  // a full-rank matrix with a nontrivial kernel needs k > n

    Mat haar(n, k);
    for (int i = 0; i < k; ++i) haar.col(i) = basis.eval(sig.entries[i].x);
    Eigen::JacobiSVD<Mat> svd(haar);
    const Vec& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > rank_tol * sv[0]) ++rank;
    if (rank < n) return false;

    // positive kernel search: max delta s.t. S lambda = 0, sum lambda = 1,
    // lambda_i - delta - slack_i = 0, all variables nonnegative
    Mat s = subgradient_matrix(sig, basis);
    Vec colscale = Vec::Ones(n);
    for (int r = 0; r < n; ++r) {
        double mx = s.row(r).cwiseAbs().maxCoeff();
        if (mx > 0) s.row(r) /= mx;
    }
    const int nv = k + 1 + k;  // lambda, delta, slacks
    Mat A = Mat::Zero(n + 1 + k, nv);
    Vec b = Vec::Zero(n + 1 + k);
    A.block(0, 0, n, k) = s;
    for (int i = 0; i < k; ++i) A(n, i) = 1.0;
    b[n] = 1.0;
    for (int i = 0; i < k; ++i) {
        A(n + 1 + i, i) = 1.0;
        A(n + 1 + i, k) = -1.0;
        A(n + 1 + i, k + 1 + i) = -1.0;
    }
    Vec cost = Vec::Zero(nv);
    cost[k] = -1.0;  // maximize delta
    SimplexResult res = solve_standard_lp(A, b, cost);
    if (res.status != SimplexResult::Status::Optimal) return false;
    return res.x[k] > 1e-9;
}

}  // namespace cheby
