#pragma once

#include <optional>
#include <vector>

#include "chebysolve/basis.hpp"
#include "chebysolve/simplex.hpp"
#include "chebysolve/target.hpp"

namespace cheby {

// Regular sampling of a box; points in row-major order over the axes with
// both endpoints included in every dimension.
struct SampleGrid {
    BoxDomain domain;
    std::vector<int> counts;
    Mat points;  // G x m

    int size() const { return static_cast<int>(points.rows()); }
};

SampleGrid regular_grid(const BoxDomain& domain, const std::vector<int>& counts);

enum class ConstraintSide : int { Plus = +1, Minus = -1 };  // +: p - f <= t, -: f - p <= t
enum class TargetFamily : int { Single = 0, Lower = -1, Upper = +1 };

struct LpConstraint {
    int grid_index;
    ConstraintSide side;
    TargetFamily family;
    double fval;
};

// Discretized minimax problem: min t over (a, t) subject to
// +-(phi(x)^T a - f(x)) <= t for every grid point, both sides; the
// set-valued form repeats the pair for f^- and f^+.
struct MinimaxLp {
    MonomialBasis basis;
    SampleGrid grid;
    Mat phi;  // G x n
    std::vector<LpConstraint> constraints;

    int num_variables() const { return basis.size() + 1; }
    int num_constraints() const { return static_cast<int>(constraints.size()); }
};

MinimaxLp assemble_lp(const MonomialBasis& basis, const SampleGrid& grid, const Vec& fvals);
MinimaxLp assemble_lp(const MonomialBasis& basis, const SampleGrid& grid,
                      const Vec& fminus_vals, const Vec& fplus_vals);

struct LpSolution {
    enum class Status { Optimal, NumericalFailure };
    Status status = Status::NumericalFailure;
    double t = 0.0;
    Vec a;
    Vec duals;  // one per constraint, nonnegative, sums to 1
    int iterations = 0;
    double condition = 0.0;        // condition estimate of the active-constraint basis
    double max_violation = 0.0;    // max over constraints of (lhs - t)
    double cs_residual = 0.0;      // complementary slackness residual
    std::string message;
};

LpSolution solve_lp(const MinimaxLp& lp);

struct ActiveIndex {
    int grid_index;
    ConstraintSide side;
    TargetFamily family;
    double dual;
    Vec x;
};

struct ActiveSet {
    std::vector<ActiveIndex> indices;
    bool applicable = true;  // false when t ~ 0 (degenerate, all errors zero)
};

// Grid points whose dual weight exceeds dual_tol relative to the largest
// dual; the paper identifies approximate extreme points this way.
ActiveSet active_indices(const MinimaxLp& lp, const LpSolution& sol, double dual_tol = 1e-8);

}  // namespace cheby
