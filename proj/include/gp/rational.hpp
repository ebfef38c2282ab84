#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "gp/errors.hpp"
#include "gp/polynomial.hpp"

namespace gp {

// Ratio of two real polynomials, ascending coefficients, reduced so that
// numerator and denominator share no root (to tolerance) and carry no
// trailing zero coefficients.
struct RationalFunction {
    Eigen::VectorXd num;
    Eigen::VectorXd den;
};

namespace detail {

// Rebuild a real polynomial from a conjugate-closed root multiset.
inline Eigen::VectorXd poly_from_roots(const std::vector<Complex>& roots, double lead) {
    Eigen::VectorXd p(1);
    p[0] = 1.0;
    std::vector<bool> done(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (done[i]) continue;
        if (std::abs(roots[i].imag()) < 1e-14 * std::max(1.0, std::abs(roots[i]))) {
            Eigen::VectorXd lin(2);
            lin << -roots[i].real(), 1.0;
            p = poly_mul(p, lin);
        } else {
            size_t partner = i;
            double best = std::numeric_limits<double>::infinity();
            for (size_t j = i + 1; j < roots.size(); ++j) {
                if (done[j]) continue;
                const double d = std::abs(roots[j] - std::conj(roots[i]));
                if (d < best) { best = d; partner = j; }
            }
            done[partner] = true;
            Eigen::VectorXd quad(3);
            quad << std::norm(roots[i]), -2.0 * roots[i].real(), 1.0;
            p = poly_mul(p, quad);
        }
    }
    return p * lead;
}

}  // namespace detail

// Cancels common roots of num and den at relative tolerance 1e-9.
inline RationalFunction make_rational(const Eigen::VectorXd& num_in,
                                      const Eigen::VectorXd& den_in) {
    Eigen::VectorXd num = poly_trim(num_in, 1e-14);
    Eigen::VectorXd den = poly_trim(den_in, 1e-14);
    if (den.size() == 1 && den[0] == 0.0)
        throw DomainError("make_rational: denominator is identically zero");
    if (num.size() == 1 && num[0] == 0.0) return {num, den};
    if (num.size() == 1 || den.size() == 1) return {num, den};

    auto nroots = poly_roots(num);
    auto droots = poly_roots(den);
    const double nlead = num[num.size() - 1];
    const double dlead = den[den.size() - 1];

    bool cancelled = false;
    std::vector<Complex> nkeep;
    for (const Complex& r : nroots) {
        bool matched = false;
        for (size_t j = 0; j < droots.size(); ++j) {
            if (std::abs(droots[j] - r) <= 1e-9 * std::max(1.0, std::abs(r))) {
                droots.erase(droots.begin() + long(j));
                matched = true;
                cancelled = true;
                break;
            }
        }
        if (!matched) nkeep.push_back(r);
    }
    if (!cancelled) return {num, den};
    return {detail::poly_from_roots(nkeep, nlead), detail::poly_from_roots(droots, dlead)};
}

inline Complex rational_eval(const RationalFunction& f, Complex lambda) {
    const Complex d = poly_eval(f.den, lambda);
    if (std::abs(d) == 0.0) throw PoleError("rational_eval: pole hit", lambda);
    return poly_eval(f.num, lambda) / d;
}

}  // namespace gp
