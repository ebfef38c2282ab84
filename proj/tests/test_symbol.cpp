#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gp/symbol.hpp"

namespace {

gp::MemoryKernel two_term() {
    Eigen::VectorXd c(2), g(2);
    c << 1.0, 1.0;
    g << 1.0, 2.0;
    return gp::make_exp_sum(c, g);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("characteristic polynomial closed forms") {
    {
        Eigen::VectorXd c(1), g(1);
        c << 1.0;
        g << 1.0;
        const Eigen::VectorXd p = gp::characteristic_polynomial(gp::make_exp_sum(c, g), 1.0);
        REQUIRE(p.size() == 3);
        CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p[2] == 1.0);
    }
    {
        const Eigen::VectorXd p = gp::characteristic_polynomial(gp::make_constant(2.5), 3.0);
        REQUIRE(p.size() == 3);
        CHECK(p[0] == doctest::Approx(7.5).epsilon(1e-14));
        CHECK(p[1] == 0.0);
        CHECK(p[2] == 1.0);
    }
    {
        const double L = 11.0;
        const Eigen::VectorXd p = gp::characteristic_polynomial(two_term(), L);
        REQUIRE(p.size() == 4);
        CHECK(p[0] == doctest::Approx(3.0 * L).epsilon(1e-14));
        CHECK(p[1] == doctest::Approx(2.0 + 2.0 * L).epsilon(1e-14));
        CHECK(p[2] == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(p[3] == 1.0);
    }
    CHECK_THROWS_AS(gp::characteristic_polynomial(two_term(), 0.0), gp::DomainError);
    CHECK_THROWS_AS(gp::characteristic_polynomial(two_term(), -1.0), gp::DomainError);
    CHECK_THROWS_AS(
        gp::characteristic_polynomial(
            gp::make_tabulated((Eigen::VectorXd(4) << 1.0, 0.8, 0.6, 0.5).finished(), 0.1), 1.0),
        gp::UnsupportedVariantError);
}

TEST_CASE("characteristic roots of the one-term kernel") {
    Eigen::VectorXd c(1), g(1);
    c << 1.0;
    g << 1.0;
    const auto roots = gp::characteristic_roots(gp::make_exp_sum(c, g), 1.0);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].real() == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(roots[0].imag() == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-13));
    CHECK(roots[1] == std::conj(roots[0]));
    CHECK(gp::hurwitz_check(roots));
}

TEST_CASE("characteristic roots of the constant kernel are a conjugate imaginary pair") {
    const auto roots = gp::characteristic_roots(gp::make_constant(1.0), 4.0);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - gp::Complex(0.0, -2.0)) < 1e-12);
    CHECK(std::abs(roots[1] - gp::Complex(0.0, 2.0)) < 1e-12);
    CHECK_FALSE(gp::hurwitz_check(roots));

    for (auto [C, L] : {std::pair{0.3, 7.0}, {2.0, 100.0}, {5.5, 0.4}}) {
        const auto r = gp::characteristic_roots(gp::make_constant(C), L);
        const double w = std::sqrt(L * C);
        REQUIRE(r.size() == 2);
        CHECK(std::abs(r[0] - gp::Complex(0.0, -w)) < 1e-12 * std::max(1.0, w));
        CHECK(std::abs(r[1] - gp::Complex(0.0, w)) < 1e-12 * std::max(1.0, w));
    }
}

TEST_CASE("high-frequency root clusters near the transform zero") {
    const auto disk = gp::make_disk(1.0);
    const auto mode = gp::make_mode(1, 20, disk);
    const auto roots = gp::characteristic_roots(two_term(), mode.lambda_sq);
    double best = 1e300;
    for (const auto& r : roots) best = std::min(best, std::abs(r - gp::Complex(-1.5)));
    CHECK(best < 1e-3);
}

TEST_CASE("hurwitz_check on the forced-stable cubic") {
    const auto roots = gp::characteristic_roots(two_term(), 10.0);
    REQUIRE(roots.size() == 3);
    CHECK(gp::hurwitz_check(roots));
}

TEST_CASE("root sequence clusters at the target with slope -1") {
    const auto disk = gp::make_disk(1.0);
    const auto seq = gp::root_sequence(two_term(), 1, 1, 40, disk, gp::Complex(-1.5));
    REQUIRE(seq.entries.size() == 40);
    CHECK(seq.m == 1);
    CHECK(seq.target == gp::Complex(-1.5));

    std::vector<double> lx, ly;
    for (size_t i = 0; i < seq.entries.size(); ++i) {
        const auto& e = seq.entries[i];
        CHECK(e.n == int(i) + 1);
        CHECK(e.dist == std::abs(e.root - seq.target));
        lx.push_back(std::log(e.lambda_sq));
        ly.push_back(std::log(e.dist));
    }
    CHECK(seq.entries.back().dist < seq.entries.front().dist / 100.0);
    CHECK(fit_slope(lx, ly) == doctest::Approx(-1.0).epsilon(0.15));

    // every tracked root satisfies the symbol it came from
    for (const auto& e : seq.entries) {
        const Eigen::VectorXd p = gp::characteristic_polynomial(two_term(), e.lambda_sq);
        CHECK(gp::poly_root_residual_ok(p, e.root));
    }
}

TEST_CASE("root sequence is independent of worker count") {
    const auto disk = gp::make_disk(1.0);
    const auto serial = gp::root_sequence(two_term(), 0, 1, 12, disk, gp::Complex(-1.5), 1);
    const auto parallel = gp::root_sequence(two_term(), 0, 1, 12, disk, gp::Complex(-1.5), 4);
    REQUIRE(serial.entries.size() == parallel.entries.size());
    for (size_t i = 0; i < serial.entries.size(); ++i) {
        CHECK(serial.entries[i].root == parallel.entries[i].root);
        CHECK(serial.entries[i].dist == parallel.entries[i].dist);
    }
}

TEST_CASE("root sequence requires a transform zero") {
    const auto disk = gp::make_disk(1.0);
    CHECK_THROWS_AS(gp::root_sequence(gp::make_constant(1.0), 0, 1, 5, disk, gp::Complex(-1.0)),
                    gp::NoTargetError);
    Eigen::VectorXd c(1), g(1);
    c << 2.0;
    g << 0.7;
    CHECK_THROWS_AS(gp::root_sequence(gp::make_exp_sum(c, g), 0, 1, 5, disk, gp::Complex(-0.7)),
                    gp::NoTargetError);
    CHECK_THROWS_AS(gp::root_sequence(two_term(), 0, 1, 5, disk, gp::Complex(-2.5)),
                    gp::DomainError);
    CHECK_THROWS_AS(gp::root_sequence(two_term(), 0, 5, 1, disk, gp::Complex(-1.5)),
                    gp::DomainError);
}

TEST_CASE("random positive kernels give left-half-plane roots") {
    std::mt19937 rng(314);
    std::uniform_real_distribution<double> coeff(0.1, 3.0);
    std::uniform_real_distribution<double> lam(0.05, 500.0);
    std::uniform_int_distribution<int> terms(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const int N = terms(rng);
        Eigen::VectorXd c(N), g(N);
        for (int j = 0; j < N; ++j) {
            c[j] = coeff(rng);
            g[j] = coeff(rng) + 1.2 * double(j);
        }
        const auto kernel = gp::make_exp_sum(c, g);
        const auto roots = gp::characteristic_roots(kernel, lam(rng));
        CHECK(gp::hurwitz_check(roots));
        // conjugate closure and pole avoidance
        for (const auto& r : roots) {
            bool paired = false;
            for (const auto& s : roots)
                if (std::abs(s - std::conj(r)) < 1e-8 * std::max(1.0, std::abs(r))) paired = true;
            CHECK(paired);
            for (int j = 0; j < N; ++j) CHECK(std::abs(r - gp::Complex(-g[j])) > 1e-9);
        }
    }
}
