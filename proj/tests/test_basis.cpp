#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "chebysolve/basis.hpp"

using namespace cheby;

TEST_CASE("basis dimension follows the binomial count") {
    CHECK(MonomialBasis(2, 1).size() == 3);
    CHECK(MonomialBasis(3, 2).size() == 10);
    CHECK(MonomialBasis(1, 0).size() == 1);
    CHECK(MonomialBasis(10, 1).size() == 11);
    CHECK(MonomialBasis(2, 5).size() == 21);

    // monotone in the degree
    int prev = 0;
    for (int d = 0; d <= 6; ++d) {
        int n = MonomialBasis(3, d).size();
        CHECK(n > prev);
        prev = n;
    }
}

TEST_CASE("constant monomial first, deterministic grlex order") {
    MonomialBasis b(2, 2);
    CHECK(b.indices()[0].exponents == std::vector<int>{0, 0});

    // serialization of the exponent table is identical across instances
    auto dump = [](const MonomialBasis& basis) {
        std::ostringstream os;
        for (const auto& mi : basis.indices()) {
            for (int e : mi.exponents) os << e << ",";
            os << ";";
        }
        return os.str();
    };
    CHECK(dump(b) == dump(MonomialBasis(2, 2)));

    for (const auto& mi : b.indices()) CHECK(mi.total_degree() <= 2);
}

TEST_CASE("eval at simple points") {
    MonomialBasis b21(2, 1);
    Vec zero = Vec::Zero(2);
    Vec phi0 = b21.eval(zero);
    CHECK(phi0[0] == 1.0);
    CHECK(phi0.tail(2).isZero());

    Vec x(2);
    x << 3.0, 5.0;
    Vec phi = b21.eval(x);
    CHECK(phi[0] == 1.0);
    CHECK(phi[1] == 3.0);
    CHECK(phi[2] == 5.0);

    MonomialBasis b13(1, 3);
    Vec two = Vec::Constant(1, 2.0);
    Vec phi2 = b13.eval(two);
    CHECK(phi2[0] == 1.0);
    CHECK(phi2[1] == 2.0);
    CHECK(phi2[2] == 4.0);
    CHECK(phi2[3] == 8.0);
}

TEST_CASE("gradient rows") {
    MonomialBasis b(1, 3);
    Vec x = Vec::Constant(1, 2.0);
    Mat g = b.grad(x);
    CHECK(g(0, 0) == 0.0);        // constant monomial
    CHECK(g(3, 0) == doctest::Approx(12.0));  // d/dx x^3 at 2
}

TEST_CASE("gradient matches central finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 1 + int(rng() % 3);
        int degree = int(rng() % 4);
        MonomialBasis b(m, degree);
        Vec x(m);
        for (int j = 0; j < m; ++j) x[j] = unif(rng);
        Mat g = b.grad(x);
        const double h = 1e-6;
        for (int j = 0; j < m; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            Vec fd = (b.eval(xp) - b.eval(xm)) / (2 * h);
            for (int i = 0; i < b.size(); ++i) {
                double scale = std::max(1.0, std::abs(fd[i]));
                CHECK(std::abs(g(i, j) - fd[i]) / scale <= 1e-6);
            }
        }
    }
}

TEST_CASE("poly evaluation") {
    MonomialBasis b(1, 2);
    Vec a(3);
    a << 0.5, 0.0, -1.0;
    CHECK(b.eval_poly(a, Vec::Constant(1, 1.0)) == doctest::Approx(-0.5));
    CHECK(b.eval_poly(a, Vec::Zero(1)) == 0.5);

    // constant polynomial is constant everywhere
    MonomialBasis b23(2, 3);
    Vec c = Vec::Zero(b23.size());
    c[0] = 4.25;
    Vec x(2);
    x << -0.3, 0.8;
    CHECK(b23.eval_poly(c, x) == 4.25);
}

TEST_CASE("first-order expansion is consistent (ratio test)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    MonomialBasis b(2, 3);
    Vec a(b.size());
    for (int i = 0; i < a.size(); ++i) a[i] = unif(rng);
    Vec x(2), u(2);
    x << 0.3, -0.4;
    u << unif(rng), unif(rng);
    Vec g = b.poly_grad(a, x);
    auto remainder = [&](double t) {
        return std::abs(b.eval_poly(a, x + t * u) - b.eval_poly(a, x) - t * g.dot(u));
    };
    double r3 = remainder(1e-3);
    double r4 = remainder(1e-4);
    CHECK(r4 <= r3 * 1e-2 * 1.5 + 1e-14);  // O(t^2) decay
}

TEST_CASE("poly hessian matches finite differences of the gradient") {
    MonomialBasis b(3, 3);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec a(b.size());
    for (int i = 0; i < a.size(); ++i) a[i] = unif(rng);
    Vec x(3);
    x << 0.2, -0.7, 0.5;
    Mat h = b.poly_hessian(a, x);
    const double step = 1e-6;
    for (int j = 0; j < 3; ++j) {
        Vec xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        Vec fd = (b.poly_grad(a, xp) - b.poly_grad(a, xm)) / (2 * step);
        for (int i = 0; i < 3; ++i) CHECK(h(i, j) == doctest::Approx(fd[i]).epsilon(1e-5));
    }
}

TEST_CASE("box domain validation") {
    Vec lo(2), hi(2);
    lo << 0.0, 0.0;
    hi << 1.0, 1.0;
    BoxDomain box(lo, hi);
    CHECK(box.contains(Vec::Constant(2, 0.5)));
    CHECK(!box.contains(Vec::Constant(2, 1.5)));
    hi[1] = 0.0;
    CHECK_THROWS(BoxDomain(lo, hi));
}
