#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cheby {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Exponent tuple of one monomial; sum of entries is its total degree.
struct MultiIndex {
    std::vector<int> exponents;

    int total_degree() const;
    bool operator==(const MultiIndex&) const = default;
};

// Axis-aligned box, the solve domain for all pipelines.
struct BoxDomain {
    Vec lower;
    Vec upper;

    BoxDomain() = default;
    BoxDomain(Vec lo, Vec hi);

    int dim() const { return static_cast<int>(lower.size()); }
    Vec width() const { return upper - lower; }
    bool contains(const Vec& x, double tol = 0.0) const;
    Vec clamp(const Vec& x) const;

    static BoxDomain unit_cube(int m);               // [0,1]^m
    static BoxDomain symmetric(int m, double r);     // [-r,r]^m
};

// Multivariate monomials of total degree <= degree over R^m, in graded
// lexicographic order with the constant term first. The ordering is fixed
// so that serialized runs are reproducible.
class MonomialBasis {
public:
    MonomialBasis(int m, int degree);

    int input_dim() const { return m_; }
    int degree() const { return degree_; }
    int size() const { return static_cast<int>(indices_.size()); }  // n
    const std::vector<MultiIndex>& indices() const { return indices_; }

    // phi(x), length n; the constant entry is phi[0] == 1.
    Vec eval(const Vec& x) const;

    // n x m matrix; row i is the gradient of monomial i at x.
    Mat grad(const Vec& x) const;

    // m x m Hessian of sum_i a_i phi_i at x.
    Mat poly_hessian(const Vec& a, const Vec& x) const;

    double eval_poly(const Vec& a, const Vec& x) const;
    Vec poly_grad(const Vec& a, const Vec& x) const;

private:
    int m_ = 1;
    int degree_ = 0;
    std::vector<MultiIndex> indices_;
};

// n = C(m+degree, degree)
long basis_dimension(int m, int degree);

}  // namespace cheby
