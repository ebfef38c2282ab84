#include <doctest.h>

#include <random>

#include "gp/polynomial.hpp"

using gp::Complex;

TEST_CASE("poly_eval and derivative") {
    Eigen::VectorXd c(4);
    c << 1.0, -2.0, 0.0, 3.0;  // 1 - 2x + 3x^3
    CHECK(gp::poly_eval(c, 2.0) == doctest::Approx(21.0));
    CHECK(gp::poly_eval(c, Complex(0.0, 1.0)) == Complex(1.0, -5.0));
    const Eigen::VectorXd d = gp::poly_derivative(c);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == -2.0);
    CHECK(d[1] == 0.0);
    CHECK(d[2] == 9.0);
}

TEST_CASE("poly_mul and trim") {
    Eigen::VectorXd a(2), b(3);
    a << 1.0, 1.0;       // 1 + x
    b << 2.0, 0.0, 1.0;  // 2 + x^2
    const Eigen::VectorXd p = gp::poly_mul(a, b);
    REQUIRE(p.size() == 4);
    CHECK(p[0] == 2.0);
    CHECK(p[1] == 2.0);
    CHECK(p[2] == 1.0);
    CHECK(p[3] == 1.0);

    Eigen::VectorXd padded(5);
    padded << 1.0, 2.0, 0.0, 0.0, 0.0;
    CHECK(gp::poly_trim(padded).size() == 2);
}

TEST_CASE("poly_roots on factored cubics") {
    Eigen::VectorXd c(4);
    // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
    c << 6.0, -7.0, 0.0, 1.0;
    const auto roots = gp::poly_roots(c);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0].real() == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(roots[1].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots[2].real() == doctest::Approx(2.0).epsilon(1e-12));
    for (const Complex& r : roots) CHECK(r.imag() == 0.0);
}

TEST_CASE("poly_roots conjugate closure") {
    Eigen::VectorXd c(3);
    c << 1.0, 0.0, 1.0;  // x^2 + 1
    const auto roots = gp::poly_roots(c);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == std::conj(roots[1]));
    CHECK(std::abs(roots[1] - Complex(0.0, 1.0)) < 1e-14);
}

TEST_CASE("poly_roots residual bound on random polynomials") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int deg = 1 + int(rng() % 8);
        Eigen::VectorXd c(deg + 1);
        for (int i = 0; i <= deg; ++i) c[i] = coef(rng);
        if (std::abs(c[deg]) < 0.1) c[deg] = 1.0;
        const auto roots = gp::poly_roots(c);
        REQUIRE(int(roots.size()) == deg);
        for (const Complex& r : roots) CHECK(gp::poly_root_residual_ok(c, r));
        // conjugate closure as a multiset
        for (const Complex& r : roots) {
            bool found = false;
            for (const Complex& s : roots)
                if (s == std::conj(r)) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("poly_monic rejects the zero polynomial") {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(gp::poly_monic(z), gp::DomainError);
}
