#include "chebysolve/simplex.hpp"

#include <Eigen/SVD>
#include <limits>

namespace cheby {

namespace {

struct Tableau {
    const Mat& A;       // M x Ntot, artificials appended
    const Vec& b;
    const Vec& c;
    int n_real;
    std::vector<int> basis;
    std::vector<char> in_basis;
    bool bland = false;
    int stall = 0;
    double last_obj = std::numeric_limits<double>::infinity();
};

// One simplex phase over the allowed column range. Artificials may stay
// basic at value zero (redundant rows); they are never allowed to enter.
SimplexResult::Status run_phase(Tableau& t, const Vec& cost, bool allow_artificial_exit,
                                const SimplexOptions& opt, int max_iter, int& iters) {
    const int m = static_cast<int>(t.b.size());
    for (; iters < max_iter; ++iters) {
        Mat B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = t.A.col(t.basis[i]);
        Eigen::PartialPivLU<Mat> lu(B);
        Eigen::PartialPivLU<Mat> lut(B.transpose());
        Vec xb = lu.solve(t.b);
        Vec cb(m);
        for (int i = 0; i < m; ++i) cb[i] = cost[t.basis[i]];
        Vec y = lut.solve(cb);

        double obj = cb.dot(xb);
        if (obj < t.last_obj - 1e-13 * (1.0 + std::abs(obj))) {
            t.stall = 0;
        } else if (++t.stall > opt.stall_limit) {
            t.bland = true;
        }
        t.last_obj = obj;

        // pricing
        int enter = -1;
        double best = -opt.cost_tol;
        const int limit = allow_artificial_exit ? static_cast<int>(t.A.cols()) : t.n_real;
        for (int j = 0; j < limit; ++j) {
            if (t.in_basis[j]) continue;
            if (j >= t.n_real && !allow_artificial_exit) continue;
            double d = cost[j] - y.dot(t.A.col(j));
            double tol = opt.cost_tol * (1.0 + std::abs(cost[j]));
            if (d < -tol) {
                if (t.bland) {
                    enter = j;
                    break;
                }
                if (d < best) {
                    best = d;
                    enter = j;
                }
            }
        }
        if (enter < 0) return SimplexResult::Status::Optimal;

        Vec w = lu.solve(t.A.col(enter));
        int leave = -1;
        double ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (w[i] <= opt.pivot_tol) continue;
            double r = std::max(xb[i], 0.0) / w[i];
            bool better = r < ratio - 1e-12 * (1.0 + ratio);
            bool tie = !better && r < ratio + 1e-12 * (1.0 + ratio);
            if (better) {
                ratio = r;
                leave = i;
            } else if (tie && leave >= 0) {
                if (t.bland ? (t.basis[i] < t.basis[leave]) : (w[i] > w[leave]))
                    leave = i;
            }
        }
        if (leave < 0) return SimplexResult::Status::Unbounded;

        t.in_basis[t.basis[leave]] = 0;
        t.basis[leave] = enter;
        t.in_basis[enter] = 1;
    }
    return SimplexResult::Status::IterationLimit;
}

}  // namespace

SimplexResult solve_standard_lp(const Mat& A_in, const Vec& b_in, const Vec& c,
                                const SimplexOptions& opt) {
    const int m = static_cast<int>(A_in.rows());
    const int n = static_cast<int>(A_in.cols());

    // rows oriented so b >= 0, artificial identity appended
    Mat A(m, n + m);
    Vec b = b_in;
    A.leftCols(n) = A_in;
    A.rightCols(m).setZero();
    for (int i = 0; i < m; ++i) {
        if (b[i] < 0) {
            b[i] = -b[i];
            A.row(i).head(n) = -A_in.row(i);
        }
        A(i, n + i) = 1.0;
    }

    Tableau t{A, b, c, n, {}, std::vector<char>(n + m, 0)};
    for (int i = 0; i < m; ++i) {
        t.basis.push_back(n + i);
        t.in_basis[n + i] = 1;
    }

    SimplexResult res;
    int max_iter = opt.max_iter > 0 ? opt.max_iter : 100 * (n + m);
    int iters = 0;

    // phase 1: minimize the artificial sum
    Vec phase1_cost = Vec::Zero(n + m);
    phase1_cost.tail(m).setOnes();
    auto status = run_phase(t, phase1_cost, false, opt, max_iter, iters);
    if (status == SimplexResult::Status::IterationLimit) {
        res.status = status;
        res.iterations = iters;
        return res;
    }
    {
        Mat B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = A.col(t.basis[i]);
        Vec xb = Eigen::PartialPivLU<Mat>(B).solve(b);
        double art = 0.0;
        for (int i = 0; i < m; ++i)
            if (t.basis[i] >= n) art += std::abs(xb[i]);
        if (art > 1e-7 * (1.0 + b.lpNorm<Eigen::Infinity>())) {
            res.status = SimplexResult::Status::Infeasible;
            res.iterations = iters;
            return res;
        }
    }

    // drive basic artificials out where a real pivot exists
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n) continue;
        Mat B(m, m);
        for (int r = 0; r < m; ++r) B.col(r) = A.col(t.basis[r]);
        Eigen::PartialPivLU<Mat> lu(B);
        for (int j = 0; j < n; ++j) {
            if (t.in_basis[j]) continue;
            Vec w = lu.solve(A.col(j));
            if (std::abs(w[i]) > 1e-7) {
                t.in_basis[t.basis[i]] = 0;
                t.basis[i] = j;
                t.in_basis[j] = 1;
                break;
            }
        }
    }

    // phase 2
    Vec phase2_cost = Vec::Zero(n + m);
    phase2_cost.head(n) = c;
    t.bland = false;
    t.stall = 0;
    t.last_obj = std::numeric_limits<double>::infinity();
    status = run_phase(t, phase2_cost, false, opt, max_iter, iters);

    res.status = status;
    res.iterations = iters;
    if (status != SimplexResult::Status::Optimal) return res;

    Mat B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = A.col(t.basis[i]);
    Eigen::PartialPivLU<Mat> lu(B);
    Vec xb = lu.solve(b);
    Vec cb(m);
    for (int i = 0; i < m; ++i) cb[i] = phase2_cost[t.basis[i]];
    res.x = Vec::Zero(n);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) res.x[t.basis[i]] = xb[i];
    res.y = Eigen::PartialPivLU<Mat>(B.transpose()).solve(cb);
    res.objective = cb.dot(xb);
    res.basis = t.basis;

    Eigen::JacobiSVD<Mat> svd(B);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    res.basis_condition = smin > 0 ? svd.singularValues()(0) / smin
                                   : std::numeric_limits<double>::infinity();
    return res;
}

}  // namespace cheby
