#pragma once

#include <optional>
#include <string>

#include "chebysolve/extrema.hpp"

namespace cheby {

// Columns are subgradients of the uniform norm at the candidate: s phi(x)
// per signature entry, or psi(x, s) in the Horner case.
Mat subgradient_matrix(const Signature& sig, const MonomialBasis& basis);
Mat subgradient_matrix(const VectorSignature& sig, const MonomialBasis& basis,
                       const HornerTarget& target);

struct KernelVector {
    Vec lambda;       // normalized to sum 1 when a kernel direction exists
    int rank = 0;
    int kernel_dim = 0;
    bool no_kernel = false;
    bool dropped = false;  // smallest singular value treated as zero
};

// Approximate kernel of S from its SVD. When k <= n and S has full column
// rank, the smallest singular value is dropped to produce the approximate
// kernel direction (flagged). Throws KernelDimensionTooHigh when the
// numerical kernel has dimension >= 2.
KernelVector kernel_vector(const Mat& S, double rank_tol = 1e-10);

enum class CertStatus { StronglyUnique, Optimal, NotCertified, Inconclusive };

std::string to_string(CertStatus s);

struct CertifyOptions {
    double rank_tol = 1e-10;      // singular values above rank_tol * sigma_max count
    double lambda_tol = 1e-10;    // nonnegativity slack
    double residual_tol = 1e-10;  // ||S lambda|| <= residual_tol * ||S||
    double zero_tol = 1e-6;       // |lambda_i| below this counts as a zero component
};

struct KernelCertificate {
    CertStatus status = CertStatus::Inconclusive;
    Vec lambda;
    int rank = 0;
    int k = 0;
    int n = 0;
    int kernel_dim = 0;
    int zero_count = 0;
    double residual = 0.0;
    std::optional<double> r_hat;
    std::string note;
};

// Kernel test on the subgradient matrix: a nonnegative nontrivial kernel
// vector certifies optimality; a strictly positive kernel with S full rank
// certifies strong uniqueness.
KernelCertificate certify(const Mat& S, const CertifyOptions& opt = {});

// max over signature entries of s * phi(x)^T u, the directional derivative
// of the uniform norm in coefficient direction u.
double directional_derivative(const Signature& sig, const MonomialBasis& basis, const Vec& u);

struct KolmogorovAudit {
    bool pass = false;
    bool inconclusive = false;
    std::optional<Vec> witness;
    double worst = 0.0;
    int trials = 0;
};

// Samples random unit directions; fails with a witness direction whose
// directional derivative is below -tol.
KolmogorovAudit kolmogorov_audit(const Signature& sig, const MonomialBasis& basis, int trials,
                                 double tol = 1e-9, uint64_t seed = 0x5eed);

// Sampled estimate of the largest ball radius inside the subgradient hull:
// min over sampled unit u of max_i S_col_i^T u. Returns 0 for rank-deficient
// S. A family statistic, not a certified bound.
double sharpness_estimate(const Mat& S, int samples, uint64_t seed = 0x5eed);

// Affine-basis optimality: LP feasibility of a common point of the convex
// hulls of the positive-error and negative-error extreme points.
bool intersecting_hulls_check(const Signature& sig, const MonomialBasis& basis);

}  // namespace cheby
