#include "chebysolve/extrema.hpp"

#include <algorithm>
#include <cmath>

namespace cheby {

ErrorFunction make_error_function(const ExplicitTarget& target, const MonomialBasis& basis,
                                  const Vec& a) {
    ErrorFunction e;
    e.absolute = true;
    e.value = [&target, &basis, a](const Vec& x) { return basis.eval_poly(a, x) - target.value(x); };
    e.grad = [&target, &basis, a](const Vec& x) {
        return Vec(basis.poly_grad(a, x) - target.gradient(x));
    };
    return e;
}

ErrorFunction make_error_function(const ImplicitTarget& target, const MonomialBasis& basis,
                                  const Vec& a) {
    ErrorFunction e;
    e.absolute = true;
    e.value = [&target, &basis, a](const Vec& x) { return basis.eval_poly(a, x) - target.value(x); };
    e.grad = [&target, &basis, a](const Vec& x) {
        auto [theta, value] = target.eval(x);
        return Vec(basis.poly_grad(a, x) - target.gradient(x, theta));
    };
    return e;
}

ErrorFunction make_error_function(const HornerTarget& target, const MonomialBasis& basis,
                                  const Vec& a) {
    ErrorFunction e;
    e.absolute = false;  // the total error is already nonnegative
    e.value = [&target, &basis, a](const Vec& x) { return target.total_error(basis, a, x); };
    e.grad = [&target, &basis, a](const Vec& x) {
        Vec terms = target.error_terms(basis, a, x);
        Vec dterms = target.error_terms_dx(basis, a, x);
        double g = (terms[0] >= 0 ? 1.0 : -1.0) * dterms[0];
        for (int j = 1; j < terms.size(); ++j)
            g += target.u * (terms[j] >= 0 ? 1.0 : -1.0) * dterms[j];
        Vec out(1);
        out[0] = g;
        return out;
    };
    return e;
}

namespace {

int error_sign(double e) { return e >= 0 ? +1 : -1; }

}  // namespace

ExtremePoint polish_extreme(const ErrorFunction& err, const Vec& x0, const BoxDomain& domain,
                            const PolishOptions& opt) {
    const int m = domain.dim();
    const Vec width = domain.width();
    Vec x = domain.clamp(x0);

    double s = 1.0;
    if (err.absolute) s = err.value(x) >= 0 ? 1.0 : -1.0;
    auto F = [&](const Vec& p) { return s * err.value(p); };
    // gradient in width-normalized coordinates
    auto G = [&](const Vec& p) { return Vec((s * err.grad(p)).cwiseProduct(width)); };

    double fscale = std::max(1.0, std::abs(F(x)));
    const double gtol = opt.grad_tol * fscale;

    // projected gradient ascent with backtracking
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        Vec g = G(x);
        double f0 = F(x);
        double alpha = 0.25;
        Vec xn = x;
        bool moved = false;
        while (alpha > 1e-16) {
            Vec cand = domain.clamp(x + alpha * g.cwiseProduct(width));
            if (F(cand) > f0 + 1e-18) {
                xn = cand;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
        double step = ((xn - x).cwiseQuotient(width)).lpNorm<Eigen::Infinity>();
        x = xn;
        if (step < 1e-12) break;
    }

    // pin coordinates resting on a bound with an outward gradient
    std::vector<Face> face(m, Face::Free);
    std::vector<int> free_set;
    {
        Vec g = G(x);
        for (int j = 0; j < m; ++j) {
            double u = (x[j] - domain.lower[j]) / width[j];
            if (u < 1e-9 && g[j] <= gtol) {
                face[j] = Face::Lower;
                x[j] = domain.lower[j];
            } else if (u > 1.0 - 1e-9 && g[j] >= -gtol) {
                face[j] = Face::Upper;
                x[j] = domain.upper[j];
            } else {
                free_set.push_back(j);
            }
        }
    }

    // Newton on the free coordinates, FD Hessian of the gradient
    for (int nit = 0; nit < 60 && !free_set.empty(); ++nit) {
        Vec g = G(x);
        Vec gf(free_set.size());
        for (size_t i = 0; i < free_set.size(); ++i) gf[i] = g[free_set[i]];
        if (gf.lpNorm<Eigen::Infinity>() <= gtol) break;
        Mat h(free_set.size(), free_set.size());
        for (size_t cj = 0; cj < free_set.size(); ++cj) {
            int j = free_set[cj];
            double hstep = 1e-6 * width[j];
            Vec xp = x, xm = x;
            xp[j] += hstep;
            xm[j] -= hstep;
            Vec gp = G(xp), gm = G(xm);
            for (size_t ri = 0; ri < free_set.size(); ++ri)
                h(ri, cj) = (gp[free_set[ri]] - gm[free_set[ri]]) / (2.0 * hstep / width[j]);
        }
        Eigen::FullPivLU<Mat> lu(0.5 * (h + h.transpose()));
        if (!lu.isInvertible()) break;
        Vec du = lu.solve(-gf);
        for (size_t i = 0; i < free_set.size(); ++i) {
            int j = free_set[i];
            x[j] += du[i] * width[j];
        }
        x = domain.clamp(x);
    }

    {
        Vec g = G(x);
        for (int j : free_set) {
            if (std::abs(g[j]) > 100 * gtol)
                throw SolverError(SolverError::Code::NonConvergence,
                                  "polish_extreme: stationarity not reached");
        }
    }

    ExtremePoint out;
    out.x = x;
    out.face = face;
    out.error = err.value(x);
    out.sign = err.absolute ? error_sign(out.error) : +1;
    return out;
}

std::vector<ExtremePoint> dedup(std::vector<ExtremePoint> points, const BoxDomain& domain,
                                double tol) {
    const Vec width = domain.width();
    std::sort(points.begin(), points.end(), [](const ExtremePoint& a, const ExtremePoint& b) {
        for (int j = 0; j < a.x.size(); ++j)
            if (a.x[j] != b.x[j]) return a.x[j] < b.x[j];
        return a.sign < b.sign;
    });
    std::vector<ExtremePoint> kept;
    for (auto& p : points) {
        bool merged = false;
        for (auto& q : kept) {
            double d = ((p.x - q.x).cwiseQuotient(width)).lpNorm<Eigen::Infinity>();
            if (d < tol && p.sign == q.sign && p.family == q.family) {
                if (std::abs(p.error) > std::abs(q.error)) q = p;
                merged = true;
                break;
            }
        }
        if (!merged) kept.push_back(std::move(p));
    }
    return kept;
}

Signature signature_of(const std::vector<ExtremePoint>& extremes) {
    if (extremes.empty())
        throw SolverError(SolverError::Code::InvalidInput, "signature_of: no extremes");
    Signature sig;
    for (const auto& p : extremes) {
        sig.entries.push_back({p.x, error_sign(p.error), p.error, p.family});
        sig.norm_value = std::max(sig.norm_value, std::abs(p.error));
    }
    return sig;
}

Signature set_valued_signature(const std::vector<ExtremePoint>& minus_extremes,
                               const std::vector<ExtremePoint>& plus_extremes,
                               double norm_tol) {
    auto norm_of = [](const std::vector<ExtremePoint>& v) {
        double n = 0.0;
        for (const auto& p : v) n = std::max(n, std::abs(p.error));
        return n;
    };
    double nminus = norm_of(minus_extremes);
    double nplus = norm_of(plus_extremes);
    double norm = std::max(nminus, nplus);
    double tol = norm_tol * std::max(1.0, norm);

    Signature sig;
    sig.norm_value = norm;
    auto add_family = [&](const std::vector<ExtremePoint>& v, TargetFamily family) {
        for (const auto& p : v) {
            if (std::abs(std::abs(p.error) - norm) <= tol)
                sig.entries.push_back({p.x, error_sign(p.error), p.error, family});
        }
    };
    if (nminus > nplus + tol) {
        add_family(minus_extremes, TargetFamily::Lower);
    } else if (nplus > nminus + tol) {
        add_family(plus_extremes, TargetFamily::Upper);
    } else {
        add_family(minus_extremes, TargetFamily::Lower);
        add_family(plus_extremes, TargetFamily::Upper);
    }
    return sig;
}

VectorSignature extended_signature(const HornerTarget& target, const MonomialBasis& basis,
                                   const Vec& a, const std::vector<ExtremePoint>& extremes,
                                   double eps_zero) {
    VectorSignature sig;
    for (const auto& p : extremes)
        sig.norm_value = std::max(sig.norm_value, target.total_error(basis, a, p.x));
    double zero_tol = eps_zero * std::max(1.0, sig.norm_value);
    for (const auto& p : extremes) {
        Vec terms = target.error_terms(basis, a, p.x);
        std::vector<int> zero_components;
        Eigen::VectorXi base_signs(terms.size());
        for (int i = 0; i < terms.size(); ++i) {
            if (std::abs(terms[i]) <= zero_tol) zero_components.push_back(i);
            base_signs[i] = terms[i] >= 0 ? +1 : -1;
        }
        const size_t variants = size_t{1} << zero_components.size();
        for (size_t mask = 0; mask < variants; ++mask) {
            Eigen::VectorXi signs = base_signs;
            for (size_t b = 0; b < zero_components.size(); ++b)
                signs[zero_components[b]] = (mask >> b) & 1 ? +1 : -1;
            sig.entries.push_back({p.x[0], signs});
        }
    }
    return sig;
}

}  // namespace cheby
