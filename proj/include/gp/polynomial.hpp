#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "gp/errors.hpp"

// Real polynomials stored as Eigen vectors of ascending coefficients:
// p(x) = c[0] + c[1] x + ... + c[d] x^d.

namespace gp {

inline Eigen::VectorXd poly_trim(const Eigen::VectorXd& c, double rel_tol = 0.0) {
    if (c.size() == 0) return c;
    const double scale = c.cwiseAbs().maxCoeff();
    const double tol = rel_tol * scale;
    Eigen::Index d = c.size() - 1;
    while (d > 0 && std::abs(c[d]) <= tol) --d;
    return c.head(d + 1);
}

template <typename Scalar>
Scalar poly_eval(const Eigen::VectorXd& c, const Scalar& x) {
    if (c.size() == 0) return Scalar(0);
    Scalar acc(c[c.size() - 1]);
    for (Eigen::Index k = c.size() - 2; k >= 0; --k) acc = acc * x + Scalar(c[k]);
    return acc;
}

inline Eigen::VectorXd poly_derivative(const Eigen::VectorXd& c) {
    if (c.size() <= 1) return Eigen::VectorXd::Zero(1);
    Eigen::VectorXd d(c.size() - 1);
    for (Eigen::Index k = 1; k < c.size(); ++k) d[k - 1] = double(k) * c[k];
    return d;
}

inline Eigen::VectorXd poly_mul(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline Eigen::VectorXd poly_monic(const Eigen::VectorXd& c_in) {
    Eigen::VectorXd c = poly_trim(c_in);
    const double lead = c[c.size() - 1];
    if (lead == 0.0) throw DomainError("poly_monic: zero polynomial");
    return c / lead;
}

// Residual acceptance used for every root we hand out.
inline bool poly_root_residual_ok(const Eigen::VectorXd& c, Complex root,
                                  double rel = 1e-9) {
    const double scale = c.cwiseAbs().maxCoeff();
    const double deg = double(c.size() - 1);
    const double bound = rel * scale * std::pow(std::max(1.0, std::abs(root)), deg);
    return std::abs(poly_eval(c, root)) <= bound;
}

// All roots of a real polynomial: balanced companion matrix, then a few
// Newton steps per root. Newton on a real-coefficient polynomial commutes
// with conjugation exactly in IEEE arithmetic, so the multiset stays closed
// under conjugation; a final pairing pass makes the symmetry bitwise.
inline std::vector<Complex> poly_roots(const Eigen::VectorXd& coeffs) {
    Eigen::VectorXd c = poly_trim(coeffs, 1e-14);
    if (c.size() <= 1) return {};

    // Scale to unit max-norm before forming the companion matrix; large
    // lambda_sq factors otherwise unbalance the coefficients badly.
    c /= c.cwiseAbs().maxCoeff();
    const Eigen::Index d = c.size() - 1;
    Eigen::VectorXd monic = c / c[d];

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -monic[i];

    Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("poly_roots: companion eigenvalue iteration failed");

    const Eigen::VectorXd dcoef = poly_derivative(c);
    std::vector<Complex> roots(static_cast<size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
        // Accept Newton steps only while they shrink the residual; near a
        // multiple root the derivative underflows relative to rounding
        // noise in p and an unguarded step can wander O(1) away.
        Complex z = es.eigenvalues()[i];
        double res = std::abs(poly_eval(c, z));
        for (int it = 0; it < 3; ++it) {
            const Complex dp = poly_eval(dcoef, z);
            if (std::abs(dp) == 0.0) break;
            const Complex step = poly_eval(c, z) / dp;
            if (std::abs(step) > 0.5 * std::max(1.0, std::abs(z))) break;
            const Complex cand = z - step;
            const double cand_res = std::abs(poly_eval(c, cand));
            if (cand_res >= res) break;
            z = cand;
            res = cand_res;
        }
        roots[size_t(i)] = z;
    }

    // Mirror each lower-half root onto the conjugate of its closest
    // upper-half partner so conjugate closure holds exactly.
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].imag() <= 0.0) continue;
        size_t best = roots.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < roots.size(); ++j) {
            if (j == i || used[j] || roots[j].imag() >= 0.0) continue;
            const double dist = std::abs(roots[j] - std::conj(roots[i]));
            if (dist < best_d) { best_d = dist; best = j; }
        }
        if (best < roots.size() && best_d <= 1e-6 * std::max(1.0, std::abs(roots[i]))) {
            roots[best] = std::conj(roots[i]);
            used[best] = true;
        }
    }

    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

}  // namespace gp
