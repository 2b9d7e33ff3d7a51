#include "chebysolve/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chebysolve/lp.hpp"

namespace cheby {

namespace {

int grid_count_per_dim(int m, const OracleOptions& opt) {
    if (m == 1) return opt.per_dim_univariate;
    if (m == 2) return opt.per_dim_bivariate;
    double per = std::pow(double(opt.point_budget), 1.0 / m);
    return std::max(3, std::min(opt.per_dim_bivariate, int(per)));
}

}  // namespace

GlobalErrorResult global_error(const ErrorFunction& err, const BoxDomain& domain,
                               const OracleOptions& opt) {
    const int m = domain.dim();
    const int per = grid_count_per_dim(m, opt);
    SampleGrid grid = regular_grid(domain, std::vector<int>(m, per));
    const long g = grid.size();

    Vec mag(g);
    for (long i = 0; i < g; ++i) {
        double e = err.value(grid.points.row(i));
        mag[i] = err.absolute ? std::abs(e) : e;
    }

    // strides for axis neighbors in the row-major layout
    std::vector<long> stride(m, 1);
    for (int j = m - 2; j >= 0; --j) stride[j] = stride[j + 1] * per;

    std::vector<long> candidates;
    std::vector<long> coords(m, 0);
    for (long i = 0; i < g; ++i) {
        bool local_max = true;
        for (int j = 0; j < m && local_max; ++j) {
            if (coords[j] > 0 && mag[i - stride[j]] > mag[i] + 1e-15) local_max = false;
            if (coords[j] + 1 < per && mag[i + stride[j]] > mag[i] + 1e-15) local_max = false;
        }
        if (local_max) candidates.push_back(i);
        for (int j = m - 1; j >= 0; --j) {
            if (++coords[j] < per) break;
            coords[j] = 0;
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](long a, long b) { return mag[a] > mag[b]; });
    if (static_cast<int>(candidates.size()) > opt.polish_top)
        candidates.resize(opt.polish_top);

    GlobalErrorResult out;
    long grid_arg = 0;
    mag.maxCoeff(&grid_arg);
    out.value = mag[grid_arg];
    std::vector<ExtremePoint> polished;
    for (long i : candidates) {
        try {
            ExtremePoint p = polish_extreme(err, grid.points.row(i), domain, opt.polish);
            double v = err.absolute ? std::abs(p.error) : p.error;
            out.value = std::max(out.value, v);
            polished.push_back(std::move(p));
        } catch (const SolverError&) {
            // a failed local polish cannot lower the sampled bound
        }
    }
    for (const auto& p : polished) {
        double v = err.absolute ? std::abs(p.error) : p.error;
        if (v >= out.value - 1e-9 * std::max(1.0, out.value)) out.argmax.push_back(p.x);
    }
    if (out.argmax.empty()) out.argmax.push_back(grid.points.row(grid_arg));
    std::sort(out.argmax.begin(), out.argmax.end(), [](const Vec& a, const Vec& b) {
        for (int j = 0; j < a.size(); ++j)
            if (a[j] != b[j]) return a[j] < b[j];
        return false;
    });
    return out;
}

std::vector<double> fd_directional(const std::function<double(const Vec&)>& m, const Vec& a,
                                   const Vec& u, const std::vector<double>& ts) {
    std::vector<double> out;
    double m0 = m(a);
    for (double t : ts) out.push_back((m(a + t * u) - m0) / t);
    return out;
}

PerturbationAuditResult perturbation_audit(
    const std::function<double(const Vec&, const Vec&)>& error_at, const Signature& sig,
    const Vec& a, const KernelCertificate& cert, int trials, double radius, uint64_t seed) {
    PerturbationAuditResult out;
    out.trials = trials;
    if (radius <= 0.0 || trials <= 0) {
        out.vacuous = true;
        return out;
    }
    const int n = static_cast<int>(a.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    double m0 = 0.0;
    for (const auto& e : sig.entries) m0 = std::max(m0, std::abs(error_at(a, e.x)));

    const bool strong = cert.status == CertStatus::StronglyUnique && cert.r_hat.has_value();
    const double slack = 2.0;  // sampled r_hat is approximate
    for (int t = 0; t < trials; ++t) {
        Vec d(n);
        for (int i = 0; i < n; ++i) d[i] = gauss(rng);
        double nrm = d.norm();
        if (nrm < 1e-14) continue;
        d *= radius * std::pow(unif(rng), 1.0 / n) / nrm;
        Vec ap = a + d;
        double lower = 0.0;  // m(a') is at least the error at a's extreme points
        for (const auto& e : sig.entries) lower = std::max(lower, std::abs(error_at(ap, e.x)));
        double required = m0 - 1e-8;
        if (strong) required += (*cert.r_hat / slack) * d.norm() - 1e-8;
        if (lower < required) {
            out.pass = false;
            out.witnesses.push_back(ap);
            if (out.witnesses.size() >= 5) break;
        }
    }
    return out;
}

int alternation_count(const Signature& sig) {
    std::vector<std::pair<double, int>> pts;
    for (const auto& e : sig.entries) {
        if (e.x.size() != 1)
            throw SolverError(SolverError::Code::InvalidInput,
                              "alternation_count: univariate signatures only");
        pts.emplace_back(e.x[0], e.sign);
    }
    std::sort(pts.begin(), pts.end());
    int count = 0, last = 0;
    for (const auto& [x, s] : pts) {
        if (s != last) {
            ++count;
            last = s;
        }
    }
    return count;
}

}  // namespace cheby
