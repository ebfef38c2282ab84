#pragma once

#include <cmath>
#include <mutex>
#include <sstream>
#include <vector>

#include "gp/errors.hpp"

namespace gp {

namespace detail {

constexpr int kBesselMaxOrder = 50;
constexpr double kBesselMaxArg = 1e4;

inline void check_bessel_args(int m, double x) {
    if (m < 0 || m > kBesselMaxOrder) {
        std::ostringstream os;
        os << "bessel_j: order " << m << " outside supported range [0, " << kBesselMaxOrder << "]";
        throw DomainError(os.str());
    }
    if (!(x >= 0.0) || x > kBesselMaxArg) {
        std::ostringstream os;
        os << "bessel_j: argument " << x << " outside supported range [0, " << kBesselMaxArg << "]";
        throw DomainError(os.str());
    }
}

inline double bessel_series_small(int m, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= m; ++k) term *= half / double(k);
    double sum = term;
    for (int k = 1; k <= 200; ++k) {
        term *= -(half * half) / (double(k) * double(m + k));
        sum += term;
        if (k > 2 && std::abs(term) <= 1e-17 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

// (1/2pi) int_0^{2pi} cos(m tau - x sin tau) dtau by the trapezoid rule.
// The integrand is periodic and entire, so the only trapezoid error is
// aliasing onto Bessel orders near N, which die off superexponentially once
// N exceeds the phase volume; 1.4(x+m)+60 points leave that tail below
// 1e-13 across the supported range. Compensated summation keeps the
// accumulation error of the long sums at the same level.
inline double bessel_integral_rep(int m, double x) {
    const int n = int(std::ceil(1.4 * (x + double(m)))) + 60;
    const double step = 2.0 * M_PI / double(n);
    double sum = 0.0, comp = 0.0;
    for (int i = 0; i < n; ++i) {
        const double tau = step * double(i);
        const double v = std::cos(double(m) * tau - x * std::sin(tau));
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return (sum + comp) / double(n);
}

}  // namespace detail

inline double bessel_j(int m, double x) {
    detail::check_bessel_args(m, x);
    if (x < 12.0) return detail::bessel_series_small(m, x);
    return detail::bessel_integral_rep(m, x);
}

inline double bessel_j_prime(int m, double x) {
    detail::check_bessel_args(m, x);
    if (m == 0) return -bessel_j(1, x);
    if (x == 0.0) return m == 1 ? 0.5 : 0.0;
    return bessel_j(m - 1, x) - (double(m) / x) * bessel_j(m, x);
}

// n-th positive zero of J_m. Zeros are simple and consecutive zeros are
// more than pi apart, so a unit-step sign scan cannot skip one; each bracket
// is narrowed by bisection and finished with Newton. Tables grow lazily and
// are shared behind a lock.
inline double bessel_zero(int m, int n) {
    if (m < 0 || m > detail::kBesselMaxOrder || n < 1 || n > 200) {
        std::ostringstream os;
        os << "bessel_zero: index (m=" << m << ", n=" << n << ") outside supported range";
        throw RangeError(os.str());
    }

    static std::mutex mtx;
    static std::vector<std::vector<double>> tables(detail::kBesselMaxOrder + 1);

    std::lock_guard<std::mutex> lock(mtx);
    std::vector<double>& zeros = tables[size_t(m)];
    while (int(zeros.size()) < n) {
        double a = zeros.empty() ? std::max(0.5, double(m)) : zeros.back() + 0.5;
        double fa = bessel_j(m, a);
        double b = a;
        for (;;) {
            b = a + 1.0;
            const double fb = bessel_j(m, b);
            if ((fa < 0.0) != (fb < 0.0)) break;
            a = b;
            fa = fb;
            if (a > detail::kBesselMaxArg)
                throw ConvergenceError("bessel_zero: scan ran past the supported range");
        }
        for (int it = 0; it < 30; ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = bessel_j(m, mid);
            if ((fa < 0.0) != (fm < 0.0))
                b = mid;
            else {
                a = mid;
                fa = fm;
            }
        }
        double z = 0.5 * (a + b);
        for (int it = 0; it < 3; ++it) {
            const double d = bessel_j_prime(m, z);
            if (d == 0.0) break;
            z -= bessel_j(m, z) / d;
        }
        zeros.push_back(z);
    }
    return zeros[size_t(n - 1)];
}

}  // namespace gp
