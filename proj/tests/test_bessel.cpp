#include <doctest.h>

#include <cmath>
#include <thread>

#include "gp/bessel.hpp"
#include "oracles.hpp"

namespace {

struct RefPoint {
    int m;
    double x;
    double value;
};

// 40-digit reference values, rounded to double.
const RefPoint kReference[] = {
    {0, 0.5, 0.938469807240812904},
    {0, 1.0, 0.765197686557966551},
    {1, 1.0, 0.440050585744933516},
    {2, 3.7000000000000002, 0.428329656206575866},
    {0, 12.0, 0.0476893107968335366},
    {1, 11.99, -0.224099371266248628},
    {5, 12.01, -0.0713377259906478931},
    {0, 25.0, 0.0962667832759581162},
    {3, 47.299999999999997, -0.0573769777993201446},
    {10, 80.0, 0.0240438509781847634},
    {20, 123.456, 0.0143757888164277799},
    {50, 300.0, 0.0104343700482433303},
    {0, 1000.0, 0.0247866861524201746},
    {7, 5000.0, 0.00914921570355098459},
    {0, 9999.0, -0.000764587486039196295},
    {50, 9999.0, 0.00174896475357777827},
    {35, 60.0, -0.0671141772283383603},
};

}  // namespace

TEST_CASE("bessel_j special values") {
    CHECK(gp::bessel_j(0, 0.0) == 1.0);
    CHECK(gp::bessel_j(1, 0.0) == 0.0);
    CHECK(gp::bessel_j(7, 0.0) == 0.0);
    CHECK(std::abs(gp::bessel_j(0, 2.404825557695773)) < 1e-12);
}

TEST_CASE("bessel_j against reference table") {
    for (const RefPoint& p : kReference)
        CHECK(std::abs(gp::bessel_j(p.m, p.x) - p.value) < 1e-12);
}

TEST_CASE("bessel_j against the series oracle at small arguments") {
    for (int m : {0, 1, 2, 5, 10, 20, 50})
        for (double x = 0.05; x < 11.95; x += 0.37)
            CHECK(std::abs(gp::bessel_j(m, x) - double(oracle::bessel_series(m, x))) < 1e-12);
}

TEST_CASE("bessel_j seam continuity between evaluation branches") {
    // Offsets small enough that the slope term |J'| * 2e-12 stays below the
    // tolerance; what remains is the branch disagreement itself.
    for (int m : {0, 1, 4, 9, 17}) {
        const double below = gp::bessel_j(m, 12.0 - 1e-12);
        const double above = gp::bessel_j(m, 12.0 + 1e-12);
        CHECK(std::abs(below - above) < 1e-10);
    }
}

TEST_CASE("three-term recurrence across the whole range") {
    for (int m : {1, 3, 10, 30, 49})
        for (double x : {0.7, 5.0, 11.9, 12.1, 40.0, 333.0, 4321.0, 9999.0}) {
            const double lhs = gp::bessel_j(m - 1, x) + gp::bessel_j(m + 1, x);
            const double rhs = (2.0 * m / x) * gp::bessel_j(m, x);
            CHECK(std::abs(lhs - rhs) < 1e-11);
        }
}

TEST_CASE("bessel_j domain guards") {
    CHECK_THROWS_AS(gp::bessel_j(51, 1.0), gp::DomainError);
    CHECK_THROWS_AS(gp::bessel_j(-1, 1.0), gp::DomainError);
    CHECK_THROWS_AS(gp::bessel_j(0, -0.5), gp::DomainError);
    CHECK_THROWS_AS(gp::bessel_j(0, 1.0001e4), gp::DomainError);
}

TEST_CASE("bessel_j_prime identities") {
    // J0' = -J1 and the recurrence form at a few points
    for (double x : {0.3, 2.0, 15.0})
        CHECK(gp::bessel_j_prime(0, x) == doctest::Approx(-gp::bessel_j(1, x)).epsilon(1e-13));
    CHECK(gp::bessel_j_prime(1, 0.0) == 0.5);
    CHECK(gp::bessel_j_prime(3, 0.0) == 0.0);
    // numerical derivative cross-check
    const double h = 1e-6;
    for (int m : {1, 5, 12}) {
        const double fd = (gp::bessel_j(m, 8.0 + h) - gp::bessel_j(m, 8.0 - h)) / (2.0 * h);
        CHECK(gp::bessel_j_prime(m, 8.0) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("bessel_zero matches the bisection oracle") {
    CHECK(gp::bessel_zero(0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-13));
    CHECK(gp::bessel_zero(1, 1) == doctest::Approx(3.831705970207512).epsilon(1e-13));
    CHECK(gp::bessel_zero(0, 2) == doctest::Approx(5.520078110286311).epsilon(1e-13));
    for (auto [m, n] : {std::pair{0, 1}, {1, 1}, {0, 2}, {2, 1}, {0, 3}, {3, 2}}) {
        const double ours = gp::bessel_zero(m, n);
        const double ref = oracle::bessel_zero(m, n);
        CHECK(std::abs(ours - ref) / ref < 1e-12);
    }
}

TEST_CASE("bessel_zero against high-precision references") {
    CHECK(gp::bessel_zero(0, 5) == doctest::Approx(14.9309177084877859).epsilon(1e-13));
    CHECK(gp::bessel_zero(1, 20) == doctest::Approx(63.6113566984812326).epsilon(1e-13));
    CHECK(gp::bessel_zero(50, 1) == doctest::Approx(57.1168991601191741).epsilon(1e-13));
    CHECK(gp::bessel_zero(10, 40) == doctest::Approx(140.230465268832375).epsilon(1e-13));
}

TEST_CASE("bessel_zero ordering and interlacing") {
    CHECK(gp::bessel_zero(0, 1) < gp::bessel_zero(1, 1));
    CHECK(gp::bessel_zero(1, 1) < gp::bessel_zero(0, 2));
    for (int m = 0; m <= 10; ++m)
        for (int n = 1; n <= 40; ++n) {
            CHECK(gp::bessel_zero(m, n) < gp::bessel_zero(m + 1, n));
            CHECK(gp::bessel_zero(m + 1, n) < gp::bessel_zero(m, n + 1));
        }
}

TEST_CASE("bessel_zero residuals and range guards") {
    for (auto [m, n] : {std::pair{0, 7}, {5, 3}, {20, 10}, {50, 2}}) {
        const double z = gp::bessel_zero(m, n);
        CHECK(std::abs(gp::bessel_j(m, z)) < 1e-12);
    }
    CHECK_THROWS_AS(gp::bessel_zero(0, 0), gp::RangeError);
    CHECK_THROWS_AS(gp::bessel_zero(0, 201), gp::RangeError);
    CHECK_THROWS_AS(gp::bessel_zero(51, 1), gp::RangeError);
}

TEST_CASE("bessel_zero concurrent first access is consistent") {
    std::vector<std::thread> pool;
    std::vector<double> got(8);
    for (int i = 0; i < 8; ++i)
        pool.emplace_back([i, &got] { got[size_t(i)] = gp::bessel_zero(7, 12); });
    for (auto& t : pool) t.join();
    for (int i = 1; i < 8; ++i) CHECK(got[size_t(i)] == got[0]);
}
