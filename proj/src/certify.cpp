#include "chebysolve/certify.hpp"

#include <Eigen/SVD>
#include <random>

#include "chebysolve/simplex.hpp"

namespace cheby {

Mat subgradient_matrix(const Signature& sig, const MonomialBasis& basis) {
    const int n = basis.size();
    const int k = static_cast<int>(sig.entries.size());
    Mat s(n, k);
    for (int i = 0; i < k; ++i)
        s.col(i) = double(sig.entries[i].sign) * basis.eval(sig.entries[i].x);
    return s;
}

Mat subgradient_matrix(const VectorSignature& sig, const MonomialBasis& basis,
                       const HornerTarget& target) {
    const int n = basis.size();
    const int k = static_cast<int>(sig.entries.size());
    Mat s(n, k);
    Vec x(1);
    for (int i = 0; i < k; ++i) {
        x[0] = sig.entries[i].x;
        const auto& signs = sig.entries[i].signs;
        Vec phi = basis.eval(x);
        Vec col = double(signs[0]) * phi;
        for (int j = 1; j <= n; ++j) {
            double cj = HornerTarget::weight(j, n);
            for (int l = j - 1; l < n; ++l)
                col[l] += target.u * double(signs[j]) * cj * phi[l];
        }
        s.col(i) = col;
    }
    return s;
}

namespace {

// Orients and normalizes a kernel direction to sum 1; empty when the sum is
// numerically zero (no annihilating-measure normalization possible).
Vec normalize_kernel(Vec v) {
    double sum = v.sum();
    if (std::abs(sum) < 1e-12 * v.cwiseAbs().sum()) return {};
    return v / sum;
}

}  // namespace

KernelVector kernel_vector(const Mat& S, double rank_tol) {
    const int k = static_cast<int>(S.cols());
    Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > rank_tol * smax) ++rank;

    KernelVector out;
    out.rank = rank;
    out.kernel_dim = k - rank;
    if (out.kernel_dim >= 2)
        throw SolverError(SolverError::Code::KernelDimensionTooHigh,
                          "kernel_vector: numerical kernel dimension >= 2");
    if (out.kernel_dim == 1) {
        out.lambda = normalize_kernel(svd.matrixV().col(k - 1));
    } else if (k <= static_cast<int>(S.rows())) {
        // full column rank: drop the least singular value for an approximate kernel
        out.dropped = true;
        out.no_kernel = true;
        out.lambda = normalize_kernel(svd.matrixV().col(k - 1));
    } else {
        out.no_kernel = true;
    }
    return out;
}

KernelCertificate certify(const Mat& S, const CertifyOptions& opt) {
    const int n = static_cast<int>(S.rows());
    const int k = static_cast<int>(S.cols());
    KernelCertificate cert;
    cert.k = k;
    cert.n = n;

    Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > opt.rank_tol * smax) ++rank;
    cert.rank = rank;
    cert.kernel_dim = k - rank;

    if (cert.kernel_dim == 0) {
        cert.status = CertStatus::NotCertified;
        cert.note = "no kernel: subgradient columns are linearly independent";
        return cert;
    }
    if (cert.kernel_dim >= 2) {
        cert.status = CertStatus::Inconclusive;
        cert.note = "kernel dimension >= 2 requires more investigation";
        return cert;
    }

    Vec lambda = normalize_kernel(svd.matrixV().col(k - 1));
    if (lambda.size() == 0) {
        cert.status = CertStatus::Inconclusive;
        cert.note = "kernel vector has numerically zero sum";
        return cert;
    }
    cert.lambda = lambda;
    cert.residual = (S * lambda).norm();
    if (cert.residual > opt.residual_tol * std::max(1.0, smax)) {
        cert.status = CertStatus::Inconclusive;
        cert.note = "kernel residual above tolerance";
        return cert;
    }
    double lmin = lambda.minCoeff();
    if (lmin < -opt.lambda_tol) {
        cert.status = CertStatus::NotCertified;
        cert.note = "kernel vector has a negative component";
        return cert;
    }
    for (int i = 0; i < lambda.size(); ++i)
        if (lambda[i] < opt.zero_tol) ++cert.zero_count;
    cert.status = (rank == n && cert.zero_count == 0) ? CertStatus::StronglyUnique
                                                      : CertStatus::Optimal;
    return cert;
}

std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::StronglyUnique: return "StronglyUnique";
        case CertStatus::Optimal: return "Optimal";
        case CertStatus::NotCertified: return "NotCertified";
        case CertStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

double directional_derivative(const Signature& sig, const MonomialBasis& basis, const Vec& u) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& entry : sig.entries)
        best = std::max(best, double(entry.sign) * basis.eval(entry.x).dot(u));
    return best;
}

namespace {

Vec random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec u(n);
    do {
        for (int i = 0; i < n; ++i) u[i] = gauss(rng);
    } while (u.norm() < 1e-12);
    return u / u.norm();
}

}  // namespace

KolmogorovAudit kolmogorov_audit(const Signature& sig, const MonomialBasis& basis, int trials,
                                 double tol, uint64_t seed) {
    KolmogorovAudit audit;
    audit.trials = trials;
    if (trials <= 0) {
        audit.pass = true;  // vacuous
        audit.inconclusive = true;
        return audit;
    }
    std::mt19937_64 rng(seed);
    audit.worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        Vec u = random_unit(rng, basis.size());
        double d = directional_derivative(sig, basis, u);
        if (d < audit.worst) audit.worst = d;
        if (d < -tol) {
            audit.pass = false;
            audit.witness = u;
            return audit;
        }
    }
    audit.pass = true;
    return audit;
}

double sharpness_estimate(const Mat& S, int samples, uint64_t seed) {
    const int n = static_cast<int>(S.rows());
    Eigen::JacobiSVD<Mat> svd(S);
    const Vec& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-10 * smax) ++rank;
    if (rank < n) return 0.0;

    std::mt19937_64 rng(seed);
    double r_hat = std::numeric_limits<double>::infinity();
    for (int t = 0; t < samples; ++t) {
        Vec u = random_unit(rng, n);
        double support = (S.transpose() * u).maxCoeff();
        r_hat = std::min(r_hat, support);
    }
    return std::max(r_hat, 0.0);
}

bool intersecting_hulls_check(const Signature& sig, const MonomialBasis& basis) {
    if (basis.degree() != 1)
        throw SolverError(SolverError::Code::InvalidInput,
                          "intersecting_hulls_check applies to affine bases only");
    const int m = basis.input_dim();
    std::vector<Vec> plus, minus;
    for (const auto& e : sig.entries)
        (e.sign > 0 ? plus : minus).push_back(e.x);
    if (plus.empty() || minus.empty()) return false;

    // feasibility: sum mu_i x+_i = sum nu_j x-_j, sum mu = 1, sum nu = 1
    const int kp = static_cast<int>(plus.size());
    const int km = static_cast<int>(minus.size());
    Mat A = Mat::Zero(m + 2, kp + km);
    Vec b = Vec::Zero(m + 2);
    for (int i = 0; i < kp; ++i) {
        A.col(i).head(m) = plus[i];
        A(m, i) = 1.0;
    }
    for (int j = 0; j < km; ++j) {
        A.col(kp + j).head(m) = -minus[j];
        A(m + 1, kp + j) = 1.0;
    }
    b[m] = 1.0;
    b[m + 1] = 1.0;
    SimplexResult res = solve_standard_lp(A, b, Vec::Zero(kp + km));
    return res.status == SimplexResult::Status::Optimal;
}

}  // namespace cheby
