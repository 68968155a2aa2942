#include "viscodiff/basis.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace viscodiff;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("eigenpair closed forms", "[basis]") {
    SECTION("first mode is the constant 1/sqrt(L)") {
        IntervalDomain dom(2.0, 4);
        const EigenMode m = eigenpair(1, dom);
        CHECK(m.eigenvalue == 0.0);
        CHECK(m.value(0.0) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
        CHECK(m.value(1.3) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    }
    SECTION("second mode on the unit interval") {
        IntervalDomain dom(1.0, 4);
        const EigenMode m = eigenpair(2, dom);
        CHECK(m.eigenvalue == Approx(kPi * kPi).epsilon(1e-15));
        CHECK(m.value(0.25) == Approx(std::sqrt(2.0) * std::cos(kPi * 0.25)).epsilon(1e-15));
    }
    SECTION("third mode eigenvalue on L = pi") {
        IntervalDomain dom(kPi, 4);
        CHECK(eigenpair(3, dom).eigenvalue == Approx(4.0).epsilon(1e-15));
    }
    SECTION("modes satisfy -v'' = lambda v and Neumann ends") {
        IntervalDomain dom(1.7, 8);
        for (int k = 1; k <= 8; ++k) {
            const EigenMode m = eigenpair(k, dom);
            CHECK(m.slope(0.0) == 0.0);
            CHECK(std::abs(m.slope(dom.length)) < 1e-12);
            // -v'' = freq^2 v for the cosine family
            const double x = 0.37;
            const double v2 = -m.frequency * m.frequency * m.value(x);
            CHECK(-v2 == Approx(m.eigenvalue * m.value(x)).margin(1e-12));
        }
    }
    SECTION("invalid arguments") {
        IntervalDomain dom(1.0, 4);
        CHECK_THROWS_AS(eigenpair(0, dom), std::invalid_argument);
        CHECK_THROWS_AS(IntervalDomain(-1.0, 4), std::invalid_argument);
        CHECK_THROWS_AS(IntervalDomain(1.0, 0), std::invalid_argument);
    }
}

TEST_CASE("evaluate_basis", "[basis]") {
    IntervalDomain dom(1.0, 4);
    CHECK(evaluate_basis(1, 0.3, dom) == Approx(1.0).epsilon(1e-15));
    CHECK(evaluate_basis(2, 0.0, dom) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(evaluate_basis(2, 0.5, dom)) < 1e-15);
    CHECK_THROWS_AS(evaluate_basis(2, -0.1, dom), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_basis(2, 1.1, dom), std::invalid_argument);
}

TEST_CASE("quadrature weights and exactness", "[basis]") {
    SECTION("partition of unity") {
        IntervalDomain dom(1.0, 1);
        const Quadrature q = make_quadrature(2, dom);
        double sum = 0.0;
        for (double w : q.weights) sum += w;
        CHECK(sum == Approx(1.0).epsilon(1e-14));
    }
    SECTION("cubic integrates exactly with 8 nodes") {
        IntervalDomain dom(1.0, 1);
        const Quadrature q = make_quadrature(8, dom);
        CHECK(integrate(q, [](double x) { return x * x * x; }) == Approx(0.25).margin(1e-14));
    }
    SECTION("unit integrand on L = 2") {
        IntervalDomain dom(2.0, 1);
        const Quadrature q = make_quadrature(8, dom);
        CHECK(integrate(q, [](double) { return 1.0; }) == Approx(2.0).margin(1e-14));
    }
    SECTION("weights positive, nodes inside, sum equals L") {
        for (int M : {2, 7, 25, 61, 128}) {
            IntervalDomain dom(3.25, 1);
            const Quadrature q = make_quadrature(M, dom);
            REQUIRE(q.size() == M);
            double sum = 0.0;
            for (int m = 0; m < M; ++m) {
                CHECK(q.weights[m] > 0.0);
                CHECK(q.nodes[m] > 0.0);
                CHECK(q.nodes[m] < dom.length);
                sum += q.weights[m];
            }
            CHECK(sum == Approx(dom.length).epsilon(1e-12));
        }
    }
    SECTION("exact up to the stated polynomial degree") {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> coef(-2.0, 2.0);
        IntervalDomain dom(1.5, 1);
        for (int M : {6, 16, 40}) {
            const Quadrature q = make_quadrature(M, dom);
            const int deg = std::min(q.exact_degree, 18);
            std::vector<double> c(deg + 1);
            for (auto& v : c) v = coef(rng);
            // analytic integral of the polynomial over [0, L]
            double exact = 0.0;
            for (int j = 0; j <= deg; ++j) exact += c[j] * std::pow(dom.length, j + 1) / (j + 1);
            const double approx = integrate(q, [&](double x) {
                double acc = 0.0;
                for (int j = deg; j >= 0; --j) acc = acc * x + c[j];
                return acc;
            });
            CHECK(approx == Approx(exact).epsilon(1e-12));
        }
    }
    SECTION("rejects fewer than two nodes") {
        IntervalDomain dom(1.0, 1);
        CHECK_THROWS_AS(make_quadrature(1, dom), std::invalid_argument);
    }
}

TEST_CASE("projection", "[basis]") {
    IntervalDomain dom(1.0, 6);
    const Quadrature quad = make_quadrature(4 * 6, dom);

    SECTION("constants hit only the first mode") {
        const SpectralCoeffs a = project([](double) { return 3.5; }, 6, quad, dom);
        CHECK(a[0] == Approx(3.5).epsilon(1e-13));
        for (int i = 1; i < 6; ++i) CHECK(std::abs(a[i]) < 1e-12);
    }
    SECTION("eigenmodes project to unit vectors") {
        const SpectralCoeffs a =
            project([&](double x) { return evaluate_basis(2, x, dom); }, 6, quad, dom);
        for (int i = 0; i < 6; ++i) CHECK(a[i] == Approx(i == 1 ? 1.0 : 0.0).margin(1e-10));
    }
    SECTION("linear ramp mean") {
        const SpectralCoeffs a = project([](double x) { return x; }, 6, quad, dom);
        CHECK(a[0] == Approx(0.5).epsilon(1e-12));
    }
    SECTION("refuses unresolved mode counts") {
        CHECK_THROWS_AS(project([](double) { return 1.0; }, 7, quad, dom),
                        std::invalid_argument);
    }
}

TEST_CASE("reconstruct", "[basis]") {
    IntervalDomain dom(1.0, 3);
    SpectralCoeffs a = SpectralCoeffs::Zero(3);
    SECTION("constant coefficients") {
        a[0] = 1.0;
        CHECK(reconstruct(a, 0.77, dom) == Approx(1.0).epsilon(1e-15));
    }
    SECTION("second mode at the left end") {
        a[1] = 1.0;
        CHECK(reconstruct(a, 0.0, dom) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    }
    SECTION("zero coefficients") { CHECK(reconstruct(a, 0.5, dom) == 0.0); }
    SECTION("range checked") { CHECK_THROWS_AS(reconstruct(a, 2.0, dom), std::invalid_argument); }
}

TEST_CASE("orthonormality within 1e-10 at 4n nodes", "[basis][property]") {
    for (int n : {8, 24, 48}) {
        for (double L : {1.0, 2.5}) {
            IntervalDomain dom(L, n);
            const Quadrature quad = make_quadrature(4 * n, dom);
            const BasisTable table(dom, quad, n);
            const Eigen::MatrixXd gram =
                table.values * table.weights.asDiagonal() * table.values.transpose();
            double worst = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    worst = std::max(worst, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
            INFO("n=" << n << " L=" << L);
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("eigenrelation: integral of v_k'^2 equals lambda_k", "[basis][property]") {
    const int n = 20;
    IntervalDomain dom(1.3, n);
    const Quadrature quad = make_quadrature(4 * n, dom);
    for (int k = 1; k <= n; ++k) {
        const EigenMode mode = eigenpair(k, dom);
        const double val = integrate(quad, [&](double x) {
            const double s = mode.slope(x);
            return s * s;
        });
        CHECK(val == Approx(mode.eigenvalue).margin(1e-8));
    }
}

TEST_CASE("projection is idempotent on the span", "[basis][property]") {
    const int n = 12;
    IntervalDomain dom(2.0, n);
    const Quadrature quad = make_quadrature(4 * n, dom);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        SpectralCoeffs a(n);
        for (int i = 0; i < n; ++i) a[i] = coef(rng);
        const SpectralCoeffs back =
            project([&](double x) { return reconstruct(a, x, dom); }, n, quad, dom);
        CHECK((back - a).cwiseAbs().maxCoeff() < 1e-10);
    }
}
