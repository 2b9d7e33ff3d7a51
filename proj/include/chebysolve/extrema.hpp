#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "chebysolve/lp.hpp"
#include "chebysolve/target.hpp"

namespace cheby {

enum class Face : uint8_t { Free, Lower, Upper };

struct ExtremePoint {
    Vec x;
    std::vector<Face> face;
    double error = 0.0;  // signed error, or the (nonnegative) Horner total error
    int sign = 0;
    TargetFamily family = TargetFamily::Single;
};

// Scalar error of a fixed candidate polynomial, evaluated pointwise. value()
// is signed for real-valued targets; for Horner targets it is the total
// error, which is maximized directly (absolute = false).
struct ErrorFunction {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> grad;
    bool absolute = true;  // maximize |value| rather than value
};

ErrorFunction make_error_function(const ExplicitTarget& target, const MonomialBasis& basis,
                                  const Vec& a);
ErrorFunction make_error_function(const ImplicitTarget& target, const MonomialBasis& basis,
                                  const Vec& a);
ErrorFunction make_error_function(const HornerTarget& target, const MonomialBasis& basis,
                                  const Vec& a);

struct PolishOptions {
    double grad_tol = 1e-10;  // on the free-coordinate gradient, width-normalized coords
    int max_iter = 400;
};

// Local maximization of the error magnitude from x0: projected gradient
// ascent until the active face settles, then Newton restricted to the free
// coordinates. Pinned coordinates land exactly on the bounds.
ExtremePoint polish_extreme(const ErrorFunction& err, const Vec& x0, const BoxDomain& domain,
                            const PolishOptions& opt = {});

// Removes near-duplicates (infinity norm in width-scaled coordinates below
// tol), keeping the representative with the largest |error|. Points with
// opposite signs are kept apart. Output is sorted by coordinates.
std::vector<ExtremePoint> dedup(std::vector<ExtremePoint> points, const BoxDomain& domain,
                                double tol = 1e-6);

struct SignatureEntry {
    Vec x;
    int sign;
    double error;
    TargetFamily family = TargetFamily::Single;
};

struct Signature {
    std::vector<SignatureEntry> entries;
    double norm_value = 0.0;
};

Signature signature_of(const std::vector<ExtremePoint>& extremes);

// Case split on which envelope attains the set-valued norm; with equal norms
// (within tol) entries from both families are present and a point may carry
// both signs.
Signature set_valued_signature(const std::vector<ExtremePoint>& minus_extremes,
                               const std::vector<ExtremePoint>& plus_extremes,
                               double norm_tol = 1e-9);

// Univariate vector signature for the Horner objective: per extreme point,
// the signs of (e_0, ..., e_n); a component within eps_zero of zero is
// enumerated with both signs, so k zero components yield 2^k entries.
struct VectorSignatureEntry {
    double x;
    Eigen::VectorXi signs;  // n+1 entries in {-1, +1}
};

struct VectorSignature {
    std::vector<VectorSignatureEntry> entries;
    double norm_value = 0.0;
};

VectorSignature extended_signature(const HornerTarget& target, const MonomialBasis& basis,
                                   const Vec& a, const std::vector<ExtremePoint>& extremes,
                                   double eps_zero = 1e-12);

}  // namespace cheby
