#include "chebysolve/target.hpp"

#include <cmath>

namespace cheby {

namespace {

constexpr double kFdStep = 1e-7;

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
    Vec g(x.size());
    for (int j = 0; j < x.size(); ++j) {
        double h = kFdStep * std::max(1.0, std::abs(x[j]));
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        g[j] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

}  // namespace

Vec ExplicitTarget::gradient(const Vec& x) const {
    if (grad) return grad(x);
    return fd_gradient(f, x);
}

Mat ExplicitTarget::hessian(const Vec& x) const {
    if (hess) return hess(x);
    // central differences of the gradient (analytic if available)
    const int m = static_cast<int>(x.size());
    Mat h(m, m);
    for (int j = 0; j < m; ++j) {
        double step = kFdStep * std::max(1.0, std::abs(x[j]));
        Vec xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        h.col(j) = (gradient(xp) - gradient(xm)) / (2.0 * step);
    }
    return 0.5 * (h + h.transpose());
}

ImplicitTarget::ImplicitTarget(int state_dim,
                               std::function<Vec(const Vec&, const Vec&)> h,
                               std::function<Mat(const Vec&, const Vec&)> dh_dtheta,
                               std::function<Mat(const Vec&, const Vec&)> dh_dx,
                               int output_index, Vec seed_x, Vec seed_theta,
                               ImplicitConfig config)
    : q_(state_dim),
      h_(std::move(h)),
      dh_dtheta_(std::move(dh_dtheta)),
      dh_dx_(std::move(dh_dx)),
      output_index_(output_index),
      seed_x_(std::move(seed_x)),
      seed_theta_(std::move(seed_theta)),
      config_(config) {
    if (output_index_ < 0 || output_index_ >= q_)
        throw SolverError(SolverError::Code::InvalidInput,
                          "ImplicitTarget: output index out of range");
    Vec r = h_(seed_x_, seed_theta_);
    if (r.lpNorm<Eigen::Infinity>() > 1e-6)
        throw SolverError(SolverError::Code::InvalidInput,
                          "ImplicitTarget: seed does not solve h(x0, theta0) = 0");
}

Vec ImplicitTarget::warm_start(const Vec& x) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (cache_->entries.empty()) return seed_theta_;
    double best = std::numeric_limits<double>::infinity();
    const Vec* theta = &seed_theta_;
    for (const auto& [cx, ct] : cache_->entries) {
        double d = (cx - x).squaredNorm();
        if (d < best) {
            best = d;
            theta = &ct;
        }
    }
    return *theta;
}

Vec ImplicitTarget::inner_newton(const Vec& x, Vec theta) const {
    for (int it = 0; it < config_.max_iter; ++it) {
        Vec r = h_(x, theta);
        if (r.lpNorm<Eigen::Infinity>() <= config_.tol) return theta;
        Mat j = dh_dtheta_(x, theta);
        Eigen::FullPivLU<Mat> lu(j);
        if (!lu.isInvertible())
            throw SolverError(SolverError::Code::SingularJacobian,
                              "implicit target: dh/dtheta singular at iterate");
        theta -= lu.solve(r);
    }
    throw SolverError(SolverError::Code::NonConvergence,
                      "implicit target: inner Newton did not converge");
}

std::pair<Vec, double> ImplicitTarget::eval(const Vec& x) const {
    Vec theta = inner_newton(x, warm_start(x));
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        if (cache_->entries.size() < 4096) cache_->entries.emplace_back(x, theta);
    }
    return {theta, theta[output_index_]};
}

Vec ImplicitTarget::gradient(const Vec& x, const Vec& theta) const {
    Mat jt = dh_dtheta_(x, theta);
    Eigen::FullPivLU<Mat> lu(jt);
    if (!lu.isInvertible())
        throw SolverError(SolverError::Code::SingularJacobian,
                          "implicit target: dh/dtheta singular");
    Mat d = -lu.solve(dh_dx_(x, theta));
    return d.row(output_index_).transpose();
}

Vec HornerTarget::error_terms(const MonomialBasis& basis, const Vec& a, const Vec& x) const {
    if (basis.input_dim() != 1)
        throw SolverError(SolverError::Code::InvalidInput,
                          "HornerTarget requires a univariate basis");
    const int n = basis.size();
    Vec phi = basis.eval(x);
    Vec e(n + 1);
    e[0] = phi.dot(a) - base.value(x);
    double suffix = 0.0;  // sum_{i >= j} a_i x^{i-1}, built backwards
    Vec suffixes(n);
    for (int i = n - 1; i >= 0; --i) {
        suffix += a[i] * phi[i];
        suffixes[i] = suffix;
    }
    for (int j = 1; j <= n; ++j) e[j] = weight(j, n) * suffixes[j - 1];
    return e;
}

double HornerTarget::total_error(const MonomialBasis& basis, const Vec& a, const Vec& x) const {
    Vec e = error_terms(basis, a, x);
    return std::abs(e[0]) + u * e.tail(e.size() - 1).cwiseAbs().sum();
}

Vec HornerTarget::error_terms_dx(const MonomialBasis& basis, const Vec& a, const Vec& x) const {
    const int n = basis.size();
    Vec dphi = basis.grad(x).col(0);
    Vec de(n + 1);
    de[0] = dphi.dot(a) - base.gradient(x)[0];
    double suffix = 0.0;
    Vec suffixes(n);
    for (int i = n - 1; i >= 0; --i) {
        suffix += a[i] * dphi[i];
        suffixes[i] = suffix;
    }
    for (int j = 1; j <= n; ++j) de[j] = weight(j, n) * suffixes[j - 1];
    return de;
}

ExplicitTarget runge_target(int m) {
    if (m < 1) throw SolverError(SolverError::Code::InvalidInput, "runge: m >= 1 required");
    ExplicitTarget t;
    t.name = "runge:" + std::to_string(m);
    t.f = [](const Vec& x) { return 1.0 / (1.0 + 25.0 * x.squaredNorm()); };
    t.grad = [](const Vec& x) {
        double d = 1.0 + 25.0 * x.squaredNorm();
        return Vec(-50.0 * x / (d * d));
    };
    t.hess = [](const Vec& x) {
        double d = 1.0 + 25.0 * x.squaredNorm();
        Mat h = Mat::Identity(x.size(), x.size()) * (-50.0 / (d * d));
        h += 5000.0 * (x * x.transpose()) / (d * d * d);
        return h;
    };
    return t;
}

ExplicitTarget quadric_target(int m) {
    ExplicitTarget t;
    t.name = "quadric:" + std::to_string(m);
    t.f = [](const Vec& x) { return x.squaredNorm(); };
    t.grad = [](const Vec& x) { return Vec(2.0 * x); };
    t.hess = [](const Vec& x) { return Mat(2.0 * Mat::Identity(x.size(), x.size())); };
    return t;
}

namespace {

constexpr double kAiryDomain = 2.0;
// Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3)
constexpr double kAi0 = 0.35502805388781723926;
constexpr double kAiPrime0 = -0.25881940379280679841;

// Maclaurin series of y'' = x y: f = 1 + x^3/6 + ..., g = x + x^4/12 + ...
// Returns (f, f', g, g'); terms below 1e-18 are dropped.
void airy_series(double x, double& f, double& fp, double& g, double& gp) {
    f = 1.0;
    fp = 0.0;
    g = x;
    gp = 1.0;
    double tf = 1.0, tg = x;
    double x3 = x * x * x;
    for (int k = 0; k < 200; ++k) {
        tf *= x3 / double((3 * k + 2) * (3 * k + 3));
        tg *= x3 / double((3 * k + 3) * (3 * k + 4));
        f += tf;
        g += tg;
        if (x != 0.0) {
            fp += (3 * k + 3) * tf / x;
            gp += (3 * k + 4) * tg / x;
        }
        if (std::abs(tf) < 1e-18 && std::abs(tg) < 1e-18) break;
    }
}

double airy_value(double x) {
    if (std::abs(x) > kAiryDomain + 1e-9)
        throw SolverError(SolverError::Code::InvalidInput,
                          "airy target: series evaluation restricted to [-2, 2]");
    double f, fp, g, gp;
    airy_series(x, f, fp, g, gp);
    return kAi0 * f + kAiPrime0 * g;
}

double airy_derivative(double x) {
    if (std::abs(x) > kAiryDomain + 1e-9)
        throw SolverError(SolverError::Code::InvalidInput,
                          "airy target: series evaluation restricted to [-2, 2]");
    double f, fp, g, gp;
    airy_series(x, f, fp, g, gp);
    return kAi0 * fp + kAiPrime0 * gp;
}

}  // namespace

ExplicitTarget airy_target() {
    ExplicitTarget t;
    t.name = "airy";
    t.f = [](const Vec& x) { return airy_value(x[0]); };
    t.grad = [](const Vec& x) {
        Vec g(1);
        g[0] = airy_derivative(x[0]);
        return g;
    };
    t.hess = [](const Vec& x) {
        Mat h(1, 1);
        h(0, 0) = x[0] * airy_value(x[0]);  // Ai'' = x Ai
        return h;
    };
    return t;
}

namespace {

constexpr double kDexBar = 59.0;   // half distance between the two base joints
constexpr double kDexArm = 90.0;   // proximal and distal arm length
constexpr double kDexScale = kDexArm * kDexArm;

// Corrected model: the two rows are mirror images through the x2 axis. The
// residuals are normalized by L^2 to keep them O(1) over the workspace.
Vec dex_h(const Vec& x, const Vec& th) {
    double u1 = -kDexBar + kDexArm * std::cos(th[0]) - x[0];
    double v1 = kDexArm * std::sin(th[0]) - x[1];
    double u2 = kDexBar + kDexArm * std::cos(th[1]) - x[0];
    double v2 = kDexArm * std::sin(th[1]) - x[1];
    Vec r(2);
    r[0] = (u1 * u1 + v1 * v1 - kDexScale) / kDexScale;
    r[1] = (u2 * u2 + v2 * v2 - kDexScale) / kDexScale;
    return r;
}

Mat dex_dh_dtheta(const Vec& x, const Vec& th) {
    double u1 = -kDexBar + kDexArm * std::cos(th[0]) - x[0];
    double v1 = kDexArm * std::sin(th[0]) - x[1];
    double u2 = kDexBar + kDexArm * std::cos(th[1]) - x[0];
    double v2 = kDexArm * std::sin(th[1]) - x[1];
    Mat j = Mat::Zero(2, 2);
    j(0, 0) = 2.0 * (-u1 * kDexArm * std::sin(th[0]) + v1 * kDexArm * std::cos(th[0])) / kDexScale;
    j(1, 1) = 2.0 * (-u2 * kDexArm * std::sin(th[1]) + v2 * kDexArm * std::cos(th[1])) / kDexScale;
    return j;
}

Mat dex_dh_dx(const Vec& x, const Vec& th) {
    double u1 = -kDexBar + kDexArm * std::cos(th[0]) - x[0];
    double v1 = kDexArm * std::sin(th[0]) - x[1];
    double u2 = kDexBar + kDexArm * std::cos(th[1]) - x[0];
    double v2 = kDexArm * std::sin(th[1]) - x[1];
    Mat j(2, 2);
    j(0, 0) = -2.0 * u1 / kDexScale;
    j(0, 1) = -2.0 * v1 / kDexScale;
    j(1, 0) = -2.0 * u2 / kDexScale;
    j(1, 1) = -2.0 * v2 / kDexScale;
    return j;
}

}  // namespace

std::shared_ptr<ImplicitTarget> dextar_target(int output_l) {
    if (output_l != 1 && output_l != 2)
        throw SolverError(SolverError::Code::InvalidInput, "dextar: l must be 1 or 2");
    Vec x0(2);
    x0 << 0.0, kDexArm - std::sqrt(kDexArm * kDexArm - kDexBar * kDexBar);
    Vec th0(2);
    th0 << M_PI / 2.0, M_PI / 2.0;
    auto t = std::make_shared<ImplicitTarget>(2, dex_h, dex_dh_dtheta, dex_dh_dx,
                                              output_l - 1, x0, th0);
    t->name = "dextar:" + std::to_string(output_l);
    return t;
}

BoxDomain dextar_domain() {
    Vec lo(2), hi(2);
    lo << 0.0, 2.0;
    hi << 40.0, 42.0;
    return BoxDomain(lo, hi);
}

}  // namespace cheby
