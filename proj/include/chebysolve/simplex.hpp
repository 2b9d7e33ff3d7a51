#pragma once

#include <vector>

#include "chebysolve/basis.hpp"

namespace cheby {

// Dense revised simplex for standard-form linear programs
//
//     min c^T x   s.t.   A x = b,  x >= 0,
//
// two-phase with artificial variables. Pricing is Dantzig with a switch to
// Bland's rule after a stall, which prevents cycling. The basis factor is
// recomputed every iteration; fine for the small row counts used here.
struct SimplexResult {
    enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
    Status status = Status::IterationLimit;
    Vec x;                    // primal solution, size N
    Vec y;                    // row multipliers, size M
    double objective = 0.0;
    std::vector<int> basis;   // basic columns
    int iterations = 0;
    double basis_condition = 0.0;
};

struct SimplexOptions {
    int max_iter = 0;           // 0: 100 * (N + M)
    double cost_tol = 1e-9;     // reduced-cost optimality tolerance
    double pivot_tol = 1e-11;
    int stall_limit = 200;      // iterations without progress before Bland
};

SimplexResult solve_standard_lp(const Mat& A, const Vec& b, const Vec& c,
                                const SimplexOptions& options = {});

}  // namespace cheby
