#include "chebysolve/lp.hpp"

namespace cheby {

SampleGrid regular_grid(const BoxDomain& domain, const std::vector<int>& counts) {
    const int m = domain.dim();
    if (static_cast<int>(counts.size()) != m)
        throw SolverError(SolverError::Code::InvalidInput, "regular_grid: counts size != m");
    long total = 1;
    for (int c : counts) {
        if (c < 2)
            throw SolverError(SolverError::Code::InvalidInput, "regular_grid: counts must be >= 2");
        total *= c;
    }
    SampleGrid grid;
    grid.domain = domain;
    grid.counts = counts;
    grid.points.resize(total, m);
    std::vector<int> idx(m, 0);
    for (long g = 0; g < total; ++g) {
        for (int j = 0; j < m; ++j) {
            double f = double(idx[j]) / double(counts[j] - 1);
            grid.points(g, j) = domain.lower[j] + f * (domain.upper[j] - domain.lower[j]);
        }
        for (int j = m - 1; j >= 0; --j) {  // row-major: last axis fastest
            if (++idx[j] < counts[j]) break;
            idx[j] = 0;
        }
    }
    return grid;
}

namespace {

MinimaxLp assemble_impl(const MonomialBasis& basis, const SampleGrid& grid,
                        const std::vector<std::pair<TargetFamily, const Vec*>>& families) {
    MinimaxLp lp{basis, grid, {}, {}};
    const int g = grid.size();
    lp.phi.resize(g, basis.size());
    for (int i = 0; i < g; ++i) lp.phi.row(i) = basis.eval(grid.points.row(i)).transpose();
    for (const auto& [family, fvals] : families) {
        if (fvals->size() != g)
            throw SolverError(SolverError::Code::InvalidInput, "assemble_lp: |fvals| != |grid|");
        for (int i = 0; i < g; ++i) {
            lp.constraints.push_back({i, ConstraintSide::Plus, family, (*fvals)[i]});
            lp.constraints.push_back({i, ConstraintSide::Minus, family, (*fvals)[i]});
        }
    }
    return lp;
}

}  // namespace

MinimaxLp assemble_lp(const MonomialBasis& basis, const SampleGrid& grid, const Vec& fvals) {
    return assemble_impl(basis, grid, {{TargetFamily::Single, &fvals}});
}

MinimaxLp assemble_lp(const MonomialBasis& basis, const SampleGrid& grid,
                      const Vec& fminus_vals, const Vec& fplus_vals) {
    for (int i = 0; i < grid.size(); ++i)
        if (fminus_vals[i] > fplus_vals[i] + 1e-12)
            throw SolverError(SolverError::Code::InvalidInput,
                              "assemble_lp: f_minus > f_plus on the grid");
    return assemble_impl(basis, grid,
                         {{TargetFamily::Lower, &fminus_vals}, {TargetFamily::Upper, &fplus_vals}});
}

// The LP is solved through its dual, which is in standard form with one row
// per basis function plus the normalization row:
//
//     min  sum_r  s_r f_r lambda_r
//     s.t. sum_r  s_r phi(x_r) lambda_r = 0,   sum_r lambda_r = 1,  lambda >= 0.
//
// The row multipliers of the dual recover the primal (a, -t), and lambda is
// exactly the vector of primal constraint duals. Basis rows are equilibrated
// before the solve; that rescales the recovered multipliers, nothing else.
LpSolution solve_lp(const MinimaxLp& lp) {
    const int n = lp.basis.size();
    const int r = lp.num_constraints();

    Mat A(n + 1, r);
    Vec cost(r);
    for (int j = 0; j < r; ++j) {
        const auto& row = lp.constraints[j];
        double s = static_cast<double>(row.side);
        A.col(j).head(n) = s * lp.phi.row(row.grid_index).transpose();
        A(n, j) = 1.0;
        cost[j] = s * row.fval;
    }

    Vec scale = Vec::Ones(n + 1);
    for (int i = 0; i < n; ++i) {
        double mx = A.row(i).cwiseAbs().maxCoeff();
        if (mx > 0) scale[i] = 1.0 / mx;
        A.row(i) *= scale[i];
    }
    Vec b = Vec::Zero(n + 1);
    b[n] = 1.0;

    SimplexResult res = solve_standard_lp(A, b, cost);

    LpSolution sol;
    sol.iterations = res.iterations;
    sol.condition = res.basis_condition;
    if (res.status != SimplexResult::Status::Optimal) {
        sol.status = LpSolution::Status::NumericalFailure;
        sol.message = res.status == SimplexResult::Status::IterationLimit
                          ? "simplex iteration limit (possible cycling or ill-conditioning)"
                          : "simplex failed";
        return sol;
    }

    sol.status = LpSolution::Status::Optimal;
    sol.a = Vec(n);
    for (int i = 0; i < n; ++i) sol.a[i] = res.y[i] * scale[i];
    sol.t = -res.y[n];
    sol.duals = res.x;

    // diagnostics: feasibility of the recovered primal and complementary slackness
    double viol = -std::numeric_limits<double>::infinity();
    double cs = 0.0;
    for (int j = 0; j < r; ++j) {
        const auto& row = lp.constraints[j];
        double s = static_cast<double>(row.side);
        double lhs = s * (lp.phi.row(row.grid_index).dot(sol.a) - row.fval);
        viol = std::max(viol, lhs - sol.t);
        cs = std::max(cs, sol.duals[j] * std::abs(sol.t - lhs));
    }
    sol.max_violation = viol;
    sol.cs_residual = cs;
    return sol;
}

ActiveSet active_indices(const MinimaxLp& lp, const LpSolution& sol, double dual_tol) {
    ActiveSet out;
    double fscale = 0.0;
    for (const auto& row : lp.constraints) fscale = std::max(fscale, std::abs(row.fval));
    if (sol.t <= 1e-12 * std::max(1.0, fscale)) {
        out.applicable = false;  // degenerate: the target is (numerically) in the span
        return out;
    }
    double dmax = sol.duals.maxCoeff();
    for (int j = 0; j < sol.duals.size(); ++j) {
        if (sol.duals[j] > dual_tol * dmax) {
            const auto& row = lp.constraints[j];
            out.indices.push_back({row.grid_index, row.side, row.family, sol.duals[j],
                                   lp.grid.points.row(row.grid_index).transpose()});
        }
    }
    return out;
}

}  // namespace cheby
