#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chebysolve/lp.hpp"

using namespace cheby;

TEST_CASE("simplex solves a tiny standard-form LP") {
    Mat a(1, 3);
    a << 1.0, 1.0, 1.0;
    Vec b = Vec::Ones(1);
    Vec c(3);
    c << -1.0, -2.0, 0.0;
    SimplexResult res = solve_standard_lp(a, b, c);
    REQUIRE(res.status == SimplexResult::Status::Optimal);
    CHECK(res.objective == doctest::Approx(-2.0));
    CHECK(res.x[1] == doctest::Approx(1.0));
}

TEST_CASE("simplex detects infeasibility and unboundedness") {
    {
        Mat a(1, 2);
        a << -1.0, -1.0;
        SimplexResult res = solve_standard_lp(a, Vec::Ones(1), Vec::Zero(2));
        CHECK(res.status == SimplexResult::Status::Infeasible);
    }
    {
        Mat a(1, 2);
        a << 1.0, -1.0;
        Vec c(2);
        c << -1.0, 0.0;
        SimplexResult res = solve_standard_lp(a, Vec::Zero(1), c);
        CHECK(res.status == SimplexResult::Status::Unbounded);
    }
}

TEST_CASE("regular grid counts and endpoints") {
    CHECK(regular_grid(BoxDomain::unit_cube(2), {36, 36}).size() == 1296);
    CHECK(regular_grid(BoxDomain::unit_cube(5), {4, 4, 4, 4, 4}).size() == 1024);

    SampleGrid g = regular_grid(BoxDomain::unit_cube(1), {2});
    CHECK(g.points(0, 0) == 0.0);
    CHECK(g.points(1, 0) == 1.0);

    // corners present
    SampleGrid g2 = regular_grid(BoxDomain::unit_cube(2), {3, 3});
    CHECK(g2.points.row(0).isApprox(Eigen::RowVector2d(0, 0)));
    CHECK(g2.points.row(8).isApprox(Eigen::RowVector2d(1, 1)));

    CHECK_THROWS(regular_grid(BoxDomain::unit_cube(1), {1}));
}

TEST_CASE("assemble_lp constraint counts") {
    MonomialBasis basis(2, 1);
    SampleGrid grid = regular_grid(BoxDomain::unit_cube(2), {36, 36});
    Vec f = Vec::Zero(grid.size());
    MinimaxLp lp = assemble_lp(basis, grid, f);
    CHECK(lp.num_variables() == 4);
    CHECK(lp.num_constraints() == 2592);

    MinimaxLp lp2 = assemble_lp(basis, grid, f, f);
    CHECK(lp2.num_constraints() == 4 * grid.size());
}

TEST_CASE("constant target gives zero discrete error and no active report") {
    MonomialBasis basis(1, 2);
    SampleGrid grid = regular_grid(BoxDomain::symmetric(1, 1.0), {41});
    Vec f = Vec::Constant(grid.size(), 3.0);
    LpSolution sol = solve_lp(assemble_lp(basis, grid, f));
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(sol.t <= 1e-12);
    CHECK(sol.a[0] == doctest::Approx(3.0));
    ActiveSet act = active_indices(assemble_lp(basis, grid, f), sol);
    CHECK(!act.applicable);
}

namespace {

// independent discrete-minimax oracle for univariate affine fits: the LP
// optimum is the largest equioscillation value over all grid triples
double affine_grid_minimax(const SampleGrid& grid, const Vec& fvals, Vec* argmin = nullptr) {
    const int g = grid.size();
    double best = 0.0;
    Vec besta(2);
    for (int i = 0; i < g; ++i) {
        for (int j = i + 1; j < g; ++j) {
            for (int k = j + 1; k < g; ++k) {
                double xi = grid.points(i, 0), xj = grid.points(j, 0), xk = grid.points(k, 0);
                // solve p(xi)-f=h, p(xj)-f=-h, p(xk)-f=h
                Mat A(3, 3);
                A << 1, xi, -1, 1, xj, 1, 1, xk, -1;
                Vec rhs(3);
                rhs << fvals[i], fvals[j], fvals[k];
                Vec sol = A.fullPivLu().solve(rhs);
                if (std::abs(sol[2]) > best) {
                    best = std::abs(sol[2]);
                    besta = sol.head(2);
                }
            }
        }
    }
    if (argmin) *argmin = besta;
    return best;
}

}  // namespace

TEST_CASE("x^2 on [-1,1], affine basis, grid 201: matches the triple oracle") {
    MonomialBasis basis(1, 1);
    SampleGrid grid = regular_grid(BoxDomain::symmetric(1, 1.0), {201});
    Vec f(grid.size());
    for (int i = 0; i < grid.size(); ++i) f[i] = grid.points(i, 0) * grid.points(i, 0);

    Vec oracle_a;
    double oracle_t = affine_grid_minimax(grid, f, &oracle_a);

    LpSolution sol = solve_lp(assemble_lp(basis, grid, f));
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(std::abs(sol.t - oracle_t) <= 1e-9);
    CHECK(std::abs(sol.t - 0.5) <= 1e-12);  // 0, +-1 are grid points
    CHECK(std::abs(sol.a[0] - 0.5) <= 1e-9);
    CHECK(std::abs(sol.a[1]) <= 1e-9);
    CHECK(sol.max_violation <= 1e-9);
    CHECK(sol.cs_residual <= 1e-8);

    // duals: nonnegative, sum 1, active constraints tight
    CHECK(sol.duals.minCoeff() >= 0.0);
    CHECK(sol.duals.sum() == doctest::Approx(1.0).epsilon(1e-9));
    MinimaxLp lp = assemble_lp(basis, grid, f);
    ActiveSet act = active_indices(lp, sol);
    REQUIRE(act.applicable);
    for (const auto& idx : act.indices) {
        double lhs = static_cast<double>(idx.side) *
                     (basis.eval_poly(sol.a, idx.x) - f[idx.grid_index]);
        CHECK(std::abs(lhs - sol.t) <= 1e-8);
    }
}

TEST_CASE("runge m=2 degree 1 reference row") {
    MonomialBasis basis(2, 1);
    SampleGrid grid = regular_grid(BoxDomain::unit_cube(2), {36, 36});
    ExplicitTarget f = runge_target(2);
    Vec fv(grid.size());
    for (int i = 0; i < grid.size(); ++i) fv[i] = f.value(grid.points.row(i));
    MinimaxLp lp = assemble_lp(basis, grid, fv);
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpSolution::Status::Optimal);
    CHECK(sol.t == doctest::Approx(0.308467).epsilon(1e-3));
    CHECK(std::abs(sol.t - 0.308467) <= 1e-4);
    ActiveSet act = active_indices(lp, sol);
    CHECK(act.indices.size() == 4);
}

TEST_CASE("discrete error is monotone in grid refinement") {
    MonomialBasis basis(1, 2);
    ExplicitTarget f = runge_target(1);
    BoxDomain dom = BoxDomain::unit_cube(1);
    double prev = -1.0;
    for (int count : {11, 21, 41}) {
        SampleGrid grid = regular_grid(dom, {count});
        Vec fv(grid.size());
        for (int i = 0; i < grid.size(); ++i) fv[i] = f.value(grid.points.row(i));
        LpSolution sol = solve_lp(assemble_lp(basis, grid, fv));
        REQUIRE(sol.status == LpSolution::Status::Optimal);
        CHECK(sol.t >= prev - 1e-12);  // refinements only add constraints
        prev = sol.t;
    }
}
