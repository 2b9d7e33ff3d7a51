#include "chebysolve/newton.hpp"

#include <cmath>

namespace cheby {

namespace {

// per-variable FD step for the implicit-model Jacobian blocks
double fd_step(double v) { return 1e-7 * std::max(1.0, std::abs(v)); }

Vec kernel_scaling(const MonomialBasis& basis, const std::vector<ExtremePoint>& extremes) {
    Vec scale = Vec::Ones(basis.size());
    for (const auto& p : extremes)
        scale = scale.cwiseMax(basis.eval(p.x).cwiseAbs());
    return scale.cwiseInverse();
}

}  // namespace

std::string to_string(NewtonFailure f) {
    switch (f) {
        case NewtonFailure::None: return "none";
        case NewtonFailure::MaxIterations: return "max_iterations";
        case NewtonFailure::SingularJacobian: return "singular_jacobian";
        case NewtonFailure::SignFlip: return "sign_flip";
    }
    return "?";
}

Vec init_kernel(const Mat& S) {
    KernelVector kv = kernel_vector(S);
    if (kv.lambda.size() == 0)
        throw SolverError(SolverError::Code::NumericalFailure,
                          "init_kernel: kernel direction could not be normalized");
    return kv.lambda;
}

// ---------------------------------------------------------------- explicit

ExplicitKktSystem::ExplicitKktSystem(const ExplicitTarget& target, const MonomialBasis& basis,
                                     const BoxDomain& domain, const NewtonInit& init)
    : target_(target), basis_(basis), domain_(domain) {
    n_ = basis.size();
    m_ = domain.dim();
    k_ = static_cast<int>(init.extremes.size());
    dim_ = n_ + k_ * m_ + k_;
    if (init.a.size() != n_ || init.lambda.size() != k_ || k_ == 0)
        throw SolverError(SolverError::Code::InvalidInput, "explicit system: bad init sizes");
    for (const auto& p : init.extremes) {
        faces_.push_back(p.face);
        signs_.push_back(p.error >= 0 ? +1 : -1);
    }
    kernel_row_scale_ = kernel_scaling(basis, init.extremes);
    v0_.resize(dim_);
    v0_.head(n_) = init.a;
    for (int i = 0; i < k_; ++i) v0_.segment(n_ + i * m_, m_) = init.extremes[i].x;
    v0_.tail(k_) = init.lambda;
}

Vec ExplicitKktSystem::residual(const Vec& v) const {
    Vec a = v.head(n_);
    Vec lambda = v.tail(k_);
    Vec r(dim_);
    int row = 0;
    std::vector<double> errs(k_);
    Vec kernel = Vec::Zero(n_);
    for (int i = 0; i < k_; ++i) {
        Vec x = v.segment(n_ + i * m_, m_);
        Vec ge = basis_.poly_grad(a, x) - target_.gradient(x);
        for (int j = 0; j < m_; ++j) {
            if (faces_[i][j] == Face::Lower) r[row++] = x[j] - domain_.lower[j];
            else if (faces_[i][j] == Face::Upper) r[row++] = x[j] - domain_.upper[j];
            else r[row++] = ge[j];
        }
        Vec phi = basis_.eval(x);
        errs[i] = phi.dot(a) - target_.value(x);
        kernel += signs_[i] * lambda[i] * phi;
    }
    for (int i = 0; i + 1 < k_; ++i)
        r[row++] = signs_[i] * errs[i] - signs_[i + 1] * errs[i + 1];
    r.segment(row, n_) = kernel.cwiseProduct(kernel_row_scale_);
    row += n_;
    r[row] = lambda.sum() - 1.0;
    return r;
}

Mat ExplicitKktSystem::jacobian(const Vec& v) const {
    Vec a = v.head(n_);
    Vec lambda = v.tail(k_);
    Mat j = Mat::Zero(dim_, dim_);
    const int xoff = n_;
    const int loff = n_ + k_ * m_;
    int row = 0;
    std::vector<Vec> phis(k_), grad_errs(k_);
    for (int i = 0; i < k_; ++i) {
        Vec x = v.segment(xoff + i * m_, m_);
        Mat g = basis_.grad(x);
        phis[i] = basis_.eval(x);
        grad_errs[i] = g.transpose() * a - target_.gradient(x);
        Mat hess_err = basis_.poly_hessian(a, x) - target_.hessian(x);
        for (int c = 0; c < m_; ++c) {
            if (faces_[i][c] != Face::Free) {
                j(row, xoff + i * m_ + c) = 1.0;
            } else {
                j.block(row, 0, 1, n_) = g.col(c).transpose();
                j.block(row, xoff + i * m_, 1, m_) = hess_err.row(c);
            }
            ++row;
        }
    }
    for (int i = 0; i + 1 < k_; ++i) {
        j.block(row, 0, 1, n_) =
            (signs_[i] * phis[i] - signs_[i + 1] * phis[i + 1]).transpose();
        j.block(row, xoff + i * m_, 1, m_) = signs_[i] * grad_errs[i].transpose();
        j.block(row, xoff + (i + 1) * m_, 1, m_) = -signs_[i + 1] * grad_errs[i + 1].transpose();
        ++row;
    }
    for (int i = 0; i < k_; ++i) {
        Vec x = v.segment(xoff + i * m_, m_);
        Mat g = basis_.grad(x);
        for (int r = 0; r < n_; ++r) {
            j(row + r, loff + i) = kernel_row_scale_[r] * signs_[i] * phis[i][r];
            for (int c = 0; c < m_; ++c)
                j(row + r, xoff + i * m_ + c) =
                    kernel_row_scale_[r] * signs_[i] * lambda[i] * g(r, c);
        }
    }
    row += n_;
    for (int i = 0; i < k_; ++i) j(row, loff + i) = 1.0;
    return j;
}

bool ExplicitKktSystem::signs_ok(const Vec& v) const {
    Vec a = v.head(n_);
    for (int i = 0; i < k_; ++i) {
        Vec x = v.segment(n_ + i * m_, m_);
        double e = basis_.eval_poly(a, x) - target_.value(x);
        if (signs_[i] * e < -1e-10) return false;
    }
    return true;
}

NewtonVariables ExplicitKktSystem::unpack(const Vec& v) const {
    NewtonVariables out;
    out.a = v.head(n_);
    out.lambda = v.tail(k_);
    for (int i = 0; i < k_; ++i) {
        ExtremePoint p;
        p.x = v.segment(n_ + i * m_, m_);
        p.face = faces_[i];
        p.error = basis_.eval_poly(out.a, p.x) - target_.value(p.x);
        p.sign = signs_[i];
        out.extremes.push_back(std::move(p));
    }
    return out;
}

double ExplicitKktSystem::extreme_error(const Vec& v) const {
    Vec a = v.head(n_);
    double e = 0.0;
    for (int i = 0; i < k_; ++i) {
        Vec x = v.segment(n_ + i * m_, m_);
        e = std::max(e, std::abs(basis_.eval_poly(a, x) - target_.value(x)));
    }
    return e;
}

// ---------------------------------------------------------------- implicit

ImplicitKktSystem::ImplicitKktSystem(const ImplicitTarget& target, const MonomialBasis& basis,
                                     const BoxDomain& domain, const NewtonInit& init)
    : target_(target), basis_(basis), domain_(domain) {
    n_ = basis.size();
    m_ = domain.dim();
    k_ = static_cast<int>(init.extremes.size());
    q_ = target.state_dim();
    dim_ = n_ + k_ * m_ + k_ * q_ + k_;
    if (init.a.size() != n_ || init.lambda.size() != k_ || k_ == 0)
        throw SolverError(SolverError::Code::InvalidInput, "implicit system: bad init sizes");
    kernel_row_scale_ = kernel_scaling(basis, init.extremes);
    v0_.resize(dim_);
    v0_.head(n_) = init.a;
    for (int i = 0; i < k_; ++i) {
        const auto& p = init.extremes[i];
        faces_.push_back(p.face);
        v0_.segment(n_ + i * m_, m_) = p.x;
        auto [theta, value] = target.eval(p.x);
        v0_.segment(n_ + k_ * m_ + i * q_, q_) = theta;
        signs_.push_back(basis.eval_poly(init.a, p.x) - value >= 0 ? +1 : -1);
    }
    v0_.tail(k_) = init.lambda;
}

Vec ImplicitKktSystem::residual(const Vec& v) const {
    Vec a = v.head(n_);
    Vec lambda = v.tail(k_);
    const int xoff = n_;
    const int toff = n_ + k_ * m_;
    const int l = target_.output_index();
    Vec r(dim_);
    int row = 0;
    std::vector<double> errs(k_);
    Vec kernel = Vec::Zero(n_);
    std::vector<Vec> hvals(k_);
    for (int i = 0; i < k_; ++i) {
        Vec x = v.segment(xoff + i * m_, m_);
        Vec theta = v.segment(toff + i * q_, q_);
        Vec ge = basis_.poly_grad(a, x) - target_.gradient(x, theta);
        for (int j = 0; j < m_; ++j) {
            if (faces_[i][j] == Face::Lower) r[row++] = x[j] - domain_.lower[j];
            else if (faces_[i][j] == Face::Upper) r[row++] = x[j] - domain_.upper[j];
            else r[row++] = ge[j];
        }
        Vec phi = basis_.eval(x);
        errs[i] = phi.dot(a) - theta[l];
        kernel += signs_[i] * lambda[i] * phi;
        hvals[i] = target_.h(x, theta);
    }
    for (int i = 0; i + 1 < k_; ++i)
        r[row++] = signs_[i] * errs[i] - signs_[i + 1] * errs[i + 1];
    for (int i = 0; i < k_; ++i) {
        r.segment(row, q_) = hvals[i];
        row += q_;
    }
    r.segment(row, n_) = kernel.cwiseProduct(kernel_row_scale_);
    row += n_;
    r[row] = lambda.sum() - 1.0;
    return r;
}

Mat ImplicitKktSystem::jacobian(const Vec& v) const {
    // central differences; the implicit-function blocks have no closed form
    Mat j(dim_, dim_);
    for (int c = 0; c < dim_; ++c) {
        double h = fd_step(v[c]);
        Vec vp = v, vm = v;
        vp[c] += h;
        vm[c] -= h;
        j.col(c) = (residual(vp) - residual(vm)) / (2.0 * h);
    }
    return j;
}

bool ImplicitKktSystem::signs_ok(const Vec& v) const {
    Vec a = v.head(n_);
    const int l = target_.output_index();
    for (int i = 0; i < k_; ++i) {
        Vec x = v.segment(n_ + i * m_, m_);
        Vec theta = v.segment(n_ + k_ * m_ + i * q_, q_);
        double e = basis_.eval_poly(a, x) - theta[l];
        if (signs_[i] * e < -1e-10) return false;
    }
    return true;
}

NewtonVariables ImplicitKktSystem::unpack(const Vec& v) const {
    NewtonVariables out;
    out.a = v.head(n_);
    out.lambda = v.tail(k_);
    out.thetas.resize(k_, q_);
    const int l = target_.output_index();
    for (int i = 0; i < k_; ++i) {
        ExtremePoint p;
        p.x = v.segment(n_ + i * m_, m_);
        p.face = faces_[i];
        Vec theta = v.segment(n_ + k_ * m_ + i * q_, q_);
        out.thetas.row(i) = theta.transpose();
        p.error = basis_.eval_poly(out.a, p.x) - theta[l];
        p.sign = signs_[i];
        out.extremes.push_back(std::move(p));
    }
    return out;
}

double ImplicitKktSystem::extreme_error(const Vec& v) const {
    Vec a = v.head(n_);
    const int l = target_.output_index();
    double e = 0.0;
    for (int i = 0; i < k_; ++i) {
        Vec x = v.segment(n_ + i * m_, m_);
        Vec theta = v.segment(n_ + k_ * m_ + i * q_, q_);
        e = std::max(e, std::abs(basis_.eval_poly(a, x) - theta[l]));
    }
    return e;
}

// ------------------------------------------------------------------ horner

HornerKktSystem::HornerKktSystem(const HornerTarget& target, const MonomialBasis& basis,
                                 const BoxDomain& domain, const NewtonInit& init)
    : target_(target), basis_(basis), domain_(domain) {
    if (basis.input_dim() != 1)
        throw SolverError(SolverError::Code::InvalidInput, "horner system: univariate only");
    n_ = basis.size();
    k_ = static_cast<int>(init.extremes.size());
    dim_ = n_ + 2 * k_;
    if (init.a.size() != n_ || init.lambda.size() != k_ || k_ == 0)
        throw SolverError(SolverError::Code::InvalidInput, "horner system: bad init sizes");
    double scale = 0.0;
    for (const auto& p : init.extremes)
        scale = std::max(scale, target.total_error(basis, init.a, p.x));
    for (const auto& p : init.extremes) {
        faces_.push_back(p.face[0]);
        Vec terms = target.error_terms(basis, init.a, p.x);
        Eigen::VectorXi s(terms.size());
        for (int i = 0; i < terms.size(); ++i) {
            if (std::abs(terms[i]) <= 1e-13 * std::max(1.0, scale))
                throw SolverError(SolverError::Code::InvalidInput,
                                  "horner system: zero component error at the initial iterate");
            s[i] = terms[i] >= 0 ? +1 : -1;
        }
        signs_.push_back(std::move(s));
    }
    v0_.resize(dim_);
    v0_.head(n_) = init.a;
    for (int i = 0; i < k_; ++i) v0_[n_ + i] = init.extremes[i].x[0];
    v0_.tail(k_) = init.lambda;
}

Vec HornerKktSystem::psi(double x, const Eigen::VectorXi& s) const {
    Vec xv(1);
    xv[0] = x;
    Vec phi = basis_.eval(xv);
    Vec col = double(s[0]) * phi;
    for (int j = 1; j <= n_; ++j) {
        double cj = HornerTarget::weight(j, n_);
        for (int l = j - 1; l < n_; ++l) col[l] += target_.u * double(s[j]) * cj * phi[l];
    }
    return col;
}

Vec HornerKktSystem::psi_dx(double x, const Eigen::VectorXi& s) const {
    Vec xv(1);
    xv[0] = x;
    Vec dphi = basis_.grad(xv).col(0);
    Vec col = double(s[0]) * dphi;
    for (int j = 1; j <= n_; ++j) {
        double cj = HornerTarget::weight(j, n_);
        for (int l = j - 1; l < n_; ++l) col[l] += target_.u * double(s[j]) * cj * dphi[l];
    }
    return col;
}

double HornerKktSystem::total(const Vec& a, double x, const Eigen::VectorXi& s) const {
    Vec xv(1);
    xv[0] = x;
    Vec terms = target_.error_terms(basis_, a, xv);
    double t = double(s[0]) * terms[0];
    for (int j = 1; j <= n_; ++j) t += target_.u * double(s[j]) * terms[j];
    return t;
}

double HornerKktSystem::total_dx(const Vec& a, double x, const Eigen::VectorXi& s) const {
    Vec xv(1);
    xv[0] = x;
    Vec dterms = target_.error_terms_dx(basis_, a, xv);
    double t = double(s[0]) * dterms[0];
    for (int j = 1; j <= n_; ++j) t += target_.u * double(s[j]) * dterms[j];
    return t;
}

Vec HornerKktSystem::residual(const Vec& v) const {
    Vec a = v.head(n_);
    Vec lambda = v.tail(k_);
    Vec r(dim_);
    int row = 0;
    for (int i = 0; i < k_; ++i) {
        double x = v[n_ + i];
        if (faces_[i] == Face::Lower) r[row++] = x - domain_.lower[0];
        else if (faces_[i] == Face::Upper) r[row++] = x - domain_.upper[0];
        else r[row++] = total_dx(a, x, signs_[i]);
    }
    for (int i = 0; i + 1 < k_; ++i)
        r[row++] = total(a, v[n_ + i], signs_[i]) - total(a, v[n_ + i + 1], signs_[i + 1]);
    Vec kernel = Vec::Zero(n_);
    for (int i = 0; i < k_; ++i) kernel += lambda[i] * psi(v[n_ + i], signs_[i]);
    r.segment(row, n_) = kernel;
    row += n_;
    r[row] = lambda.sum() - 1.0;
    return r;
}

Mat HornerKktSystem::jacobian(const Vec& v) const {
    Vec a = v.head(n_);
    Vec lambda = v.tail(k_);
    Mat j = Mat::Zero(dim_, dim_);
    const int xoff = n_;
    const int loff = n_ + k_;
    int row = 0;

    // d(total)/da_l and d(total_dx)/da_l share the weight s_0 + u sum s_j c_j
    auto aweight = [&](const Eigen::VectorXi& s, int l) {
        double w = double(s[0]);
        for (int jj = 1; jj <= l + 1; ++jj) w += target_.u * double(s[jj]) * HornerTarget::weight(jj, n_);
        return w;
    };

    for (int i = 0; i < k_; ++i) {
        double x = v[xoff + i];
        if (faces_[i] != Face::Free) {
            j(row, xoff + i) = 1.0;
            ++row;
            continue;
        }
        Vec xv(1);
        xv[0] = x;
        Vec dphi = basis_.grad(xv).col(0);
        Vec d2phi(n_);
        for (int l = 0; l < n_; ++l) {
            int e = basis_.indices()[l].exponents[0];
            d2phi[l] = e >= 2 ? double(e) * (e - 1) * std::pow(x, e - 2) : 0.0;
        }
        for (int l = 0; l < n_; ++l) j(row, l) = aweight(signs_[i], l) * dphi[l];
        double dxx = double(signs_[i][0]) * (d2phi.dot(a) - target_.base.hessian(xv)(0, 0));
        for (int jj = 1; jj <= n_; ++jj) {
            double cj = HornerTarget::weight(jj, n_);
            double suffix = 0.0;
            for (int l = jj - 1; l < n_; ++l) suffix += a[l] * d2phi[l];
            dxx += target_.u * double(signs_[i][jj]) * cj * suffix;
        }
        j(row, xoff + i) = dxx;
        ++row;
    }
    for (int i = 0; i + 1 < k_; ++i) {
        Vec pa = psi(v[xoff + i], signs_[i]);
        Vec pb = psi(v[xoff + i + 1], signs_[i + 1]);
        j.block(row, 0, 1, n_) = (pa - pb).transpose();
        j(row, xoff + i) = total_dx(a, v[xoff + i], signs_[i]);
        j(row, xoff + i + 1) = -total_dx(a, v[xoff + i + 1], signs_[i + 1]);
        ++row;
    }
    for (int i = 0; i < k_; ++i) {
        Vec p = psi(v[xoff + i], signs_[i]);
        Vec pdx = psi_dx(v[xoff + i], signs_[i]);
        for (int r = 0; r < n_; ++r) {
            j(row + r, loff + i) = p[r];
            j(row + r, xoff + i) = lambda[i] * pdx[r];
        }
    }
    row += n_;
    for (int i = 0; i < k_; ++i) j(row, loff + i) = 1.0;
    return j;
}

bool HornerKktSystem::signs_ok(const Vec& v) const {
    Vec a = v.head(n_);
    for (int i = 0; i < k_; ++i) {
        Vec xv(1);
        xv[0] = v[n_ + i];
        Vec terms = target_.error_terms(basis_, a, xv);
        for (int c = 0; c < terms.size(); ++c)
            if (double(signs_[i][c]) * terms[c] < -1e-10) return false;
    }
    return true;
}

NewtonVariables HornerKktSystem::unpack(const Vec& v) const {
    NewtonVariables out;
    out.a = v.head(n_);
    out.lambda = v.tail(k_);
    for (int i = 0; i < k_; ++i) {
        ExtremePoint p;
        p.x = Vec(1);
        p.x[0] = v[n_ + i];
        p.face = {faces_[i]};
        p.error = target_.total_error(basis_, out.a, p.x);
        p.sign = +1;
        out.extremes.push_back(std::move(p));
    }
    return out;
}

double HornerKktSystem::extreme_error(const Vec& v) const {
    Vec a = v.head(n_);
    double e = 0.0;
    for (int i = 0; i < k_; ++i) {
        Vec xv(1);
        xv[0] = v[n_ + i];
        e = std::max(e, target_.total_error(basis_, a, xv));
    }
    return e;
}

// ------------------------------------------------------------------- audit

NewtonAudit audit_solution(const ExplicitTarget& target, const MonomialBasis& basis,
                           const BoxDomain& domain, const NewtonVariables& vars) {
    NewtonAudit audit;
    double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
    Vec kernel = Vec::Zero(basis.size());
    for (size_t i = 0; i < vars.extremes.size(); ++i) {
        const auto& p = vars.extremes[i];
        double e = std::abs(basis.eval_poly(vars.a, p.x) - target.value(p.x));
        emin = std::min(emin, e);
        emax = std::max(emax, e);
        kernel += p.sign * vars.lambda[i] * basis.eval(p.x);
        Vec ge = basis.poly_grad(vars.a, p.x) - target.gradient(p.x);
        for (int j = 0; j < domain.dim(); ++j) {
            if (p.face[j] == Face::Lower)
                audit.pin_residual = std::max(audit.pin_residual, std::abs(p.x[j] - domain.lower[j]));
            else if (p.face[j] == Face::Upper)
                audit.pin_residual = std::max(audit.pin_residual, std::abs(p.x[j] - domain.upper[j]));
            else
                audit.stationarity_residual = std::max(audit.stationarity_residual, std::abs(ge[j]));
        }
    }
    audit.error_spread = emax - emin;
    audit.kernel_residual = kernel.lpNorm<Eigen::Infinity>();
    return audit;
}

}  // namespace cheby
