#pragma once

#include <vector>

#include "chebysolve/certify.hpp"
#include "chebysolve/extrema.hpp"

namespace cheby {

struct NewtonOptions {
    double tol = 1e-12;  // infinity norm of the (row-scaled) residual
    int max_iter = 50;
};

enum class NewtonFailure {
    None,
    MaxIterations,
    SingularJacobian,
    SignFlip,
};

std::string to_string(NewtonFailure f);

struct NewtonInit {
    Vec a;
    std::vector<ExtremePoint> extremes;  // face masks decide pinned coordinates
    Vec lambda;
};

struct NewtonVariables {
    Vec a;
    std::vector<ExtremePoint> extremes;
    Vec lambda;
    Mat thetas;  // k x q, implicit systems only
};

struct NewtonReport {
    bool converged = false;
    NewtonFailure failure = NewtonFailure::None;
    int iterations = 0;
    std::vector<double> residual_history;
    std::vector<double> quadratic_ratios;  // r_{k+1} / r_k^2
    NewtonVariables vars;
    double extreme_error = 0.0;  // common |error| (total error for Horner)
};

// Initial kernel vector from the approximate subgradient matrix: the right
// singular vector of the least singular value (dropped to zero when S has
// full column rank), oriented nonnegative and normalized to sum 1.
Vec init_kernel(const Mat& S);

// Square optimality system for an explicit target: per extreme and
// coordinate either a pinned-bound equation or stationarity of the error,
// k-1 equal-error equations with frozen signs, n kernel equations and one
// normalization row; k m + k + n equations and unknowns in total.
class ExplicitKktSystem {
public:
    ExplicitKktSystem(const ExplicitTarget& target, const MonomialBasis& basis,
                      const BoxDomain& domain, const NewtonInit& init);

    int dim() const { return dim_; }
    const Vec& initial() const { return v0_; }
    Vec residual(const Vec& v) const;
    Mat jacobian(const Vec& v) const;
    bool signs_ok(const Vec& v) const;
    NewtonVariables unpack(const Vec& v) const;
    double extreme_error(const Vec& v) const;

private:
    const ExplicitTarget& target_;
    const MonomialBasis& basis_;
    BoxDomain domain_;
    int n_, m_, k_, dim_;
    std::vector<std::vector<Face>> faces_;
    std::vector<int> signs_;
    Vec kernel_row_scale_;
    Vec v0_;
};

// Same structure with the target given only through h(x, theta) = 0: each
// extreme point carries its own theta block and q residual rows h(x_i,
// theta_i) = 0, and the target gradient is replaced by the implicit-function
// formula. The target f itself is never evaluated.
class ImplicitKktSystem {
public:
    ImplicitKktSystem(const ImplicitTarget& target, const MonomialBasis& basis,
                      const BoxDomain& domain, const NewtonInit& init);

    int dim() const { return dim_; }
    const Vec& initial() const { return v0_; }
    Vec residual(const Vec& v) const;
    Mat jacobian(const Vec& v) const;  // finite differences
    bool signs_ok(const Vec& v) const;
    NewtonVariables unpack(const Vec& v) const;
    double extreme_error(const Vec& v) const;

private:
    const ImplicitTarget& target_;
    const MonomialBasis& basis_;
    BoxDomain domain_;
    int n_, m_, k_, q_, dim_;
    std::vector<std::vector<Face>> faces_;
    std::vector<int> signs_;
    Vec kernel_row_scale_;
    Vec v0_;
};

// Univariate system for the Horner objective |e_0| + u sum |e_j|: extremality
// (pinned or stationary total error), equal total errors, and the kernel
// condition on the psi subgradients, all with the full component sign
// vectors frozen from the initial iterate; dimension 2k + n.
class HornerKktSystem {
public:
    HornerKktSystem(const HornerTarget& target, const MonomialBasis& basis,
                    const BoxDomain& domain, const NewtonInit& init);

    int dim() const { return dim_; }
    const Vec& initial() const { return v0_; }
    Vec residual(const Vec& v) const;
    Mat jacobian(const Vec& v) const;
    bool signs_ok(const Vec& v) const;
    NewtonVariables unpack(const Vec& v) const;
    double extreme_error(const Vec& v) const;

    const std::vector<Eigen::VectorXi>& frozen_signs() const { return signs_; }

private:
    Vec psi(double x, const Eigen::VectorXi& s) const;
    Vec psi_dx(double x, const Eigen::VectorXi& s) const;
    double total(const Vec& a, double x, const Eigen::VectorXi& s) const;
    double total_dx(const Vec& a, double x, const Eigen::VectorXi& s) const;

    const HornerTarget& target_;
    const MonomialBasis& basis_;
    BoxDomain domain_;
    int n_, k_, dim_;
    std::vector<Face> faces_;
    std::vector<Eigen::VectorXi> signs_;
    Vec v0_;
};

template <class System>
NewtonReport newton_solve(const System& system, const NewtonOptions& opt = {});

// Residuals of the optimality conditions at a solution, for post-convergence
// audits: equal errors, kernel equation, pinned bounds, stationarity.
struct NewtonAudit {
    double error_spread = 0.0;
    double kernel_residual = 0.0;     // ||S lambda||_inf
    double pin_residual = 0.0;
    double stationarity_residual = 0.0;
};

NewtonAudit audit_solution(const ExplicitTarget& target, const MonomialBasis& basis,
                           const BoxDomain& domain, const NewtonVariables& vars);

}  // namespace cheby

#include "chebysolve/newton_impl.hpp"
