#include "chebysolve/basis.hpp"

#include <numeric>
#include <stdexcept>

namespace cheby {

namespace {

double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

// Exponent tuples summing to d, in descending lexicographic order, so the
// first variable carries the highest exponent first.
void enumerate_level(int m, int d, std::vector<int>& prefix,
                     std::vector<MultiIndex>& out) {
    if (m == 1) {
        prefix.push_back(d);
        out.push_back(MultiIndex{prefix});
        prefix.pop_back();
        return;
    }
    for (int e = d; e >= 0; --e) {
        prefix.push_back(e);
        enumerate_level(m - 1, d - e, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

int MultiIndex::total_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

BoxDomain::BoxDomain(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size())
        throw std::invalid_argument("BoxDomain: bound size mismatch");
    for (int j = 0; j < lower.size(); ++j)
        if (!(lower[j] < upper[j]))
            throw std::invalid_argument("BoxDomain: lower must be < upper");
}

bool BoxDomain::contains(const Vec& x, double tol) const {
    for (int j = 0; j < lower.size(); ++j)
        if (x[j] < lower[j] - tol || x[j] > upper[j] + tol) return false;
    return true;
}

Vec BoxDomain::clamp(const Vec& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
}

BoxDomain BoxDomain::unit_cube(int m) {
    return BoxDomain(Vec::Zero(m), Vec::Ones(m));
}

BoxDomain BoxDomain::symmetric(int m, double r) {
    return BoxDomain(Vec::Constant(m, -r), Vec::Constant(m, r));
}

long basis_dimension(int m, int degree) {
    long n = 1;
    for (int i = 1; i <= m; ++i) n = n * (degree + i) / i;
    return n;
}

MonomialBasis::MonomialBasis(int m, int degree) : m_(m), degree_(degree) {
    if (m < 1) throw std::invalid_argument("MonomialBasis: m must be >= 1");
    if (degree < 0) throw std::invalid_argument("MonomialBasis: degree must be >= 0");
    std::vector<int> prefix;
    for (int d = 0; d <= degree; ++d) enumerate_level(m, d, prefix, indices_);
    if (static_cast<long>(indices_.size()) != basis_dimension(m, degree))
        throw std::logic_error("MonomialBasis: enumeration count mismatch");
}

Vec MonomialBasis::eval(const Vec& x) const {
    Vec phi(size());
    for (int i = 0; i < size(); ++i) {
        double v = 1.0;
        for (int j = 0; j < m_; ++j) v *= ipow(x[j], indices_[i].exponents[j]);
        phi[i] = v;
    }
    return phi;
}

Mat MonomialBasis::grad(const Vec& x) const {
    Mat g = Mat::Zero(size(), m_);
    for (int i = 0; i < size(); ++i) {
        const auto& e = indices_[i].exponents;
        for (int j = 0; j < m_; ++j) {
            if (e[j] == 0) continue;
            double v = e[j] * ipow(x[j], e[j] - 1);
            for (int l = 0; l < m_; ++l)
                if (l != j) v *= ipow(x[l], e[l]);
            g(i, j) = v;
        }
    }
    return g;
}

Mat MonomialBasis::poly_hessian(const Vec& a, const Vec& x) const {
    Mat h = Mat::Zero(m_, m_);
    for (int i = 0; i < size(); ++i) {
        if (a[i] == 0.0) continue;
        const auto& e = indices_[i].exponents;
        for (int j = 0; j < m_; ++j) {
            for (int l = j; l < m_; ++l) {
                double v;
                if (j == l) {
                    if (e[j] < 2) continue;
                    v = double(e[j]) * (e[j] - 1) * ipow(x[j], e[j] - 2);
                    for (int r = 0; r < m_; ++r)
                        if (r != j) v *= ipow(x[r], e[r]);
                } else {
                    if (e[j] == 0 || e[l] == 0) continue;
                    v = double(e[j]) * e[l] * ipow(x[j], e[j] - 1) * ipow(x[l], e[l] - 1);
                    for (int r = 0; r < m_; ++r)
                        if (r != j && r != l) v *= ipow(x[r], e[r]);
                }
                h(j, l) += a[i] * v;
                if (j != l) h(l, j) += a[i] * v;
            }
        }
    }
    return h;
}

double MonomialBasis::eval_poly(const Vec& a, const Vec& x) const {
    return eval(x).dot(a);
}

Vec MonomialBasis::poly_grad(const Vec& a, const Vec& x) const {
    return grad(x).transpose() * a;
}

}  // namespace cheby
