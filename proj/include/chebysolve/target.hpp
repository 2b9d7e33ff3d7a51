#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "chebysolve/basis.hpp"

namespace cheby {

// Hard numerical failures raised by solvers.
class SolverError : public std::runtime_error {
public:
    enum class Code {
        NonConvergence,
        SingularJacobian,
        KernelDimensionTooHigh,
        NumericalFailure,
        InvalidInput,
    };
    SolverError(Code code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

// A scalar function of x with optional analytic derivatives; missing
// derivatives fall back to central finite differences.
struct ExplicitTarget {
    std::function<double(const Vec&)> f;
    std::function<Vec(const Vec&)> grad;       // optional
    std::function<Mat(const Vec&)> hess;       // optional
    std::string name;

    double value(const Vec& x) const { return f(x); }
    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;
};

// Target defined by h(x, theta) = 0 with theta recovered by an inner Newton
// iteration; the approximated scalar is theta[output_index]. Evaluations are
// warm-started from the nearest previously solved point so the continuation
// stays on the branch selected by the seed solution.
struct ImplicitConfig {
    double tol = 1e-12;
    int max_iter = 50;
};

class ImplicitTarget {
public:
    ImplicitTarget(int state_dim,
                   std::function<Vec(const Vec&, const Vec&)> h,
                   std::function<Mat(const Vec&, const Vec&)> dh_dtheta,
                   std::function<Mat(const Vec&, const Vec&)> dh_dx,
                   int output_index, Vec seed_x, Vec seed_theta,
                   ImplicitConfig config = ImplicitConfig{});

    int state_dim() const { return q_; }
    int output_index() const { return output_index_; }
    const ImplicitConfig& config() const { return config_; }

    Vec h(const Vec& x, const Vec& theta) const { return h_(x, theta); }
    Mat dh_dtheta(const Vec& x, const Vec& theta) const { return dh_dtheta_(x, theta); }
    Mat dh_dx(const Vec& x, const Vec& theta) const { return dh_dx_(x, theta); }

    // Solves h(x, theta) = 0; returns (theta, theta[output_index]).
    std::pair<Vec, double> eval(const Vec& x) const;

    // Implicit-function-theorem gradient of theta[output_index] at a solved
    // point: row `output_index` of -(dh/dtheta)^{-1} (dh/dx).
    Vec gradient(const Vec& x, const Vec& theta) const;

    double value(const Vec& x) const { return eval(x).second; }

    std::string name;

private:
    Vec warm_start(const Vec& x) const;
    Vec inner_newton(const Vec& x, Vec theta) const;

    int q_;
    std::function<Vec(const Vec&, const Vec&)> h_;
    std::function<Mat(const Vec&, const Vec&)> dh_dtheta_;
    std::function<Mat(const Vec&, const Vec&)> dh_dx_;
    int output_index_;
    Vec seed_x_, seed_theta_;
    ImplicitConfig config_;

    struct Cache {
        std::mutex mutex;
        std::vector<std::pair<Vec, Vec>> entries;  // (x, theta)
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Envelope pair of a totally complete family of targets; f_minus <= f_plus
// pointwise on the domain (checked where sampled).
struct SetValuedTarget {
    ExplicitTarget f_minus;
    ExplicitTarget f_plus;
    std::string name;
};

// Univariate target whose objective adds the first-order worst-case Horner
// evaluation error u * sum_j |e_j(a,x)| to the approximation error |e_0|.
struct HornerTarget {
    ExplicitTarget base;
    double u = std::pow(2.0, -53);  // roundoff unit 2^-p

    // weights c_1 = c_n = 1 and c_j = 2 otherwise
    static double weight(int j, int n) { return (j == 1 || j == n) ? 1.0 : 2.0; }

    // (e_0, ..., e_n): e_0 = p - f, e_j = (E_j phi)^T a with E_j the diagonal
    // matrix that is zero on the first j-1 entries and c_j elsewhere.
    Vec error_terms(const MonomialBasis& basis, const Vec& a, const Vec& x) const;

    // |e_0| + u * sum_{j>=1} |e_j|
    double total_error(const MonomialBasis& basis, const Vec& a, const Vec& x) const;

    // d/dx of the error terms
    Vec error_terms_dx(const MonomialBasis& basis, const Vec& a, const Vec& x) const;
};

using Target = std::variant<ExplicitTarget, ImplicitTarget, SetValuedTarget, HornerTarget>;

// f(x) = 1 / (1 + 25 x^T x) with analytic gradient and Hessian.
ExplicitTarget runge_target(int m);

// Airy function Ai on [-2, 2] by Maclaurin series, truncated below 1e-18;
// evaluations outside that interval throw.
ExplicitTarget airy_target();

// f(x) = x^T x
ExplicitTarget quadric_target(int m);

// Corrected two-bar geometric model of the DexTAR robot (l = 59, L = 90,
// residuals normalized by L^2), approximating theta_l for l in {1, 2} around
// the home configuration x ~ (0, 22), theta = (pi/2, pi/2).
std::shared_ptr<ImplicitTarget> dextar_target(int output_l);

// Workspace used by the DexTAR experiments.
BoxDomain dextar_domain();

}  // namespace cheby
