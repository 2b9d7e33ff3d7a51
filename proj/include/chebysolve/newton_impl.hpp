#pragma once

// template body for newton_solve; included from newton.hpp

namespace cheby {

template <class System>
NewtonReport newton_solve(const System& system, const NewtonOptions& opt) {
    NewtonReport report;
    Vec v = system.initial();
    Vec r = system.residual(v);
    double res = r.lpNorm<Eigen::Infinity>();
    report.residual_history.push_back(res);

    for (int it = 0; it < opt.max_iter; ++it) {
        if (res <= opt.tol) break;
        Mat j = system.jacobian(v);

        // column equilibration, then a full-pivot solve
        Vec colscale(j.cols());
        for (int c = 0; c < j.cols(); ++c) {
            double mx = j.col(c).cwiseAbs().maxCoeff();
            colscale[c] = mx > 0 ? 1.0 / mx : 1.0;
            j.col(c) *= colscale[c];
        }
        Eigen::FullPivLU<Mat> lu(j);
        if (!lu.isInvertible()) {
            report.failure = NewtonFailure::SingularJacobian;
            report.iterations = it;
            report.vars = system.unpack(v);
            return report;
        }
        Vec step = lu.solve(-r).cwiseProduct(colscale);
        v += step;
        ++report.iterations;

        if (!system.signs_ok(v)) {
            report.failure = NewtonFailure::SignFlip;
            report.vars = system.unpack(v);
            return report;
        }
        double prev = res;
        r = system.residual(v);
        res = r.lpNorm<Eigen::Infinity>();
        report.residual_history.push_back(res);
        if (prev > 0) report.quadratic_ratios.push_back(res / (prev * prev));
    }

    report.converged = res <= opt.tol;
    if (!report.converged && report.failure == NewtonFailure::None)
        report.failure = NewtonFailure::MaxIterations;
    report.vars = system.unpack(v);
    report.extreme_error = system.extreme_error(v);
    return report;
}

}  // namespace cheby
