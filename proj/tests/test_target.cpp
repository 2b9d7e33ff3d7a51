#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chebysolve/target.hpp"

using namespace cheby;

namespace {

// independent long-truncation series for the Airy cross-checks; constants
// from the gamma function rather than hard-coded literals
double airy_series_oracle(double x, int terms) {
    double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    double aip0 = -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
    double f = 1.0, g = x, tf = 1.0, tg = x;
    double x3 = x * x * x;
    for (int k = 0; k < terms; ++k) {
        tf *= x3 / double((3 * k + 2) * (3 * k + 3));
        tg *= x3 / double((3 * k + 3) * (3 * k + 4));
        f += tf;
        g += tg;
    }
    return ai0 * f + aip0 * g;
}

}  // namespace

TEST_CASE("runge target values and gradient") {
    ExplicitTarget t = runge_target(2);
    CHECK(t.value(Vec::Zero(2)) == 1.0);
    CHECK(t.value(Vec::Ones(2)) == doctest::Approx(1.0 / 51.0).epsilon(1e-14));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Vec x(2);
        x << unif(rng), unif(rng);
        Vec g = t.gradient(x);
        const double h = 1e-6;
        for (int j = 0; j < 2; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            double fd = (t.value(xp) - t.value(xm)) / (2 * h);
            CHECK(std::abs(g[j] - fd) / std::max(1.0, std::abs(fd)) <= 1e-6);
        }
    }
}

TEST_CASE("airy values against the long series oracle") {
    ExplicitTarget airy = airy_target();
    CHECK(airy.value(Vec::Zero(1)) == doctest::Approx(0.3550280539).epsilon(1e-9));
    CHECK(airy.gradient(Vec::Zero(1))[0] == doctest::Approx(-0.2588194038).epsilon(1e-9));

    for (double x : {1.0, -1.0, 0.5, 2.0, -2.0, 1.7}) {
        double got = airy.value(Vec::Constant(1, x));
        double want = airy_series_oracle(x, 50);
        CHECK(std::abs(got - want) <= 1e-15);
    }
    CHECK_THROWS(airy.value(Vec::Constant(1, 2.5)));
}

TEST_CASE("airy derivative identity Ai'' = x Ai") {
    ExplicitTarget airy = airy_target();
    for (double x : {-1.5, -0.3, 0.7, 1.9}) {
        Vec xv = Vec::Constant(1, x);
        double h = 1e-5;
        double fd2 = (airy.value(Vec::Constant(1, x + h)) - 2 * airy.value(xv) +
                      airy.value(Vec::Constant(1, x - h))) /
                     (h * h);
        CHECK(airy.hessian(xv)(0, 0) == doctest::Approx(x * airy.value(xv)).epsilon(1e-12));
        CHECK(fd2 == doctest::Approx(x * airy.value(xv)).epsilon(1e-4));
    }
}

TEST_CASE("dextar home configuration") {
    auto t = dextar_target(1);
    Vec x(2);
    x << 0.0, 90.0 - std::sqrt(4619.0);
    auto [theta, value] = t->eval(x);
    CHECK(std::abs(theta[0] - M_PI / 2) <= 1e-9);
    CHECK(std::abs(theta[1] - M_PI / 2) <= 1e-9);
    CHECK(value == doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK(t->h(x, theta).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("dextar residual stays small near the seed") {
    auto t = dextar_target(2);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(0.0, 5.0), uy(18.0, 26.0);
    for (int trial = 0; trial < 10; ++trial) {
        Vec x(2);
        x << ux(rng), uy(rng);
        auto [theta, value] = t->eval(x);
        CHECK(t->h(x, theta).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
}

TEST_CASE("dextar implicit gradient: finite differences and mirror symmetry") {
    auto t1 = dextar_target(1);
    auto t2 = dextar_target(2);
    Vec x(2);
    x << 0.0, 90.0 - std::sqrt(4619.0);  // home: mirror-symmetric configuration

    auto [theta, v] = t1->eval(x);
    Vec g1 = t1->gradient(x, theta);
    const double h = 1e-6;
    for (int j = 0; j < 2; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        double fd = (t1->eval(xp).second - t1->eval(xm).second) / (2 * h);
        CHECK(std::abs(g1[j] - fd) / std::max(1.0, std::abs(fd)) <= 1e-5);
    }
    // mirror symmetry theta2(-x1, x2) = pi - theta1(x1, x2): equal x1
    // derivatives and opposite x2 derivatives on the symmetry axis
    Vec g2 = t2->gradient(x, theta);
    CHECK(g1[0] == doctest::Approx(g2[0]).epsilon(1e-9));
    CHECK(g1[1] == doctest::Approx(-g2[1]).epsilon(1e-9));
    double h2 = 1e-6;
    Vec xp = x, xm = x;
    xp[0] += h2;
    xm[0] -= h2;
    double fd2 = (t2->eval(xp).second - t2->eval(xm).second) / (2 * h2);
    CHECK(std::abs(g2[0] - fd2) <= 1e-7);
}

TEST_CASE("implicit target with h = theta - g(x) reproduces g") {
    auto g = [](const Vec& x) {
        Vec out(2);
        out[0] = x[0] * x[0] + x[1];
        out[1] = std::sin(x[0]);
        return out;
    };
    ImplicitTarget t(
        2, [g](const Vec& x, const Vec& th) { return Vec(th - g(x)); },
        [](const Vec&, const Vec&) { return Mat(Mat::Identity(2, 2)); },
        [](const Vec& x, const Vec&) {
            Mat j(2, 2);
            j << -2 * x[0], -1.0, -std::cos(x[0]), 0.0;
            return j;
        },
        0, Vec::Zero(2), g(Vec::Zero(2)));
    Vec x(2);
    x << 0.3, -0.2;
    CHECK(t.value(x) == doctest::Approx(0.3 * 0.3 - 0.2).epsilon(1e-12));
    auto [theta, value] = t.eval(x);
    Vec grad = t.gradient(x, theta);
    CHECK(grad[0] == doctest::Approx(2 * 0.3).epsilon(1e-10));
    CHECK(grad[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("horner error masks for n=4") {
    MonomialBasis b(1, 3);  // n = 4
    HornerTarget t{quadric_target(1), 1.0};
    Vec a(4);
    a << 1.0, 1.0, 1.0, 1.0;
    Vec x = Vec::Constant(1, 1.0);
    Vec e = t.error_terms(b, a, x);
    // E_1 = I, E_2 = diag(0,2,2,2), E_3 = diag(0,0,2,2), E_4 = diag(0,0,0,1)
    CHECK(e[1] == doctest::Approx(4.0));
    CHECK(e[2] == doctest::Approx(6.0));
    CHECK(e[3] == doctest::Approx(4.0));
    CHECK(e[4] == doctest::Approx(1.0));
}

TEST_CASE("horner error terms, zero coefficients and n=2 expansion") {
    MonomialBasis b(1, 1);  // n = 2
    ExplicitTarget f = quadric_target(1);
    HornerTarget t{f, 0.5};

    Vec zero = Vec::Zero(2);
    Vec x = Vec::Constant(1, 0.7);
    Vec e0 = t.error_terms(b, zero, x);
    CHECK(e0[0] == doctest::Approx(-f.value(x)));
    CHECK(e0[1] == 0.0);
    CHECK(e0[2] == 0.0);

    Vec a(2);
    a << 0.3, -0.8;
    Vec e = t.error_terms(b, a, x);
    CHECK(e[2] == doctest::Approx(-0.8 * 0.7));  // c_2 = c_n = 1
    CHECK(e[1] == doctest::Approx(0.3 - 0.8 * 0.7));
}

TEST_CASE("horner total error properties") {
    MonomialBasis b(1, 3);
    ExplicitTarget f = quadric_target(1);
    Vec a(4);
    a << 0.1, -0.2, 0.3, 0.4;
    Vec x = Vec::Constant(1, 0.9);

    HornerTarget t0{f, 0.0};
    CHECK(t0.total_error(b, a, x) ==
          doctest::Approx(std::abs(b.eval_poly(a, x) - f.value(x))).epsilon(1e-15));

    HornerTarget tz{f, 1e-7};
    CHECK(tz.total_error(b, Vec::Zero(4), x) == doctest::Approx(std::abs(f.value(x))));

    // monotone non-decreasing in u, pointwise
    double prev = 0.0;
    for (double u : {0.0, 1e-8, 1e-4, 1e-2}) {
        HornerTarget tu{f, u};
        double v = tu.total_error(b, a, x);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("runge hessian matches finite differences") {
    ExplicitTarget t = runge_target(3);
    Vec x(3);
    x << 0.2, 0.5, 0.8;
    Mat h = t.hessian(x);
    const double step = 1e-5;
    for (int j = 0; j < 3; ++j) {
        Vec xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        Vec fd = (t.gradient(xp) - t.gradient(xm)) / (2 * step);
        for (int i = 0; i < 3; ++i) CHECK(h(i, j) == doctest::Approx(fd[i]).epsilon(1e-6));
    }
}
