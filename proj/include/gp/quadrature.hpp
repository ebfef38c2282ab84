#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>

#include "gp/errors.hpp"

namespace gp {

// Gauss-Legendre nodes and weights on [-1, 1] from the symmetric Jacobi
// matrix (Golub-Welsch); weights are 2 * (first eigenvector component)^2.
inline void gauss_legendre(int npts, Eigen::VectorXd& x, Eigen::VectorXd& w) {
    if (npts < 1) throw DomainError("gauss_legendre: need at least one node");

    static std::mutex mtx;
    static std::map<int, std::pair<Eigen::VectorXd, Eigen::VectorXd>> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(npts);
        if (it != cache.end()) {
            x = it->second.first;
            w = it->second.second;
            return;
        }
    }

    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(npts, npts);
    for (int k = 1; k < npts; ++k) {
        const double b = double(k) / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("gauss_legendre: Jacobi eigen decomposition failed");
    x = es.eigenvalues();
    w.resize(npts);
    for (int i = 0; i < npts; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        w[i] = 2.0 * v0 * v0;
    }

    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(npts, std::make_pair(x, w));
}

struct RadialRule {
    Eigen::VectorXd r;  // strictly increasing nodes in (0, R)
    Eigen::VectorXd w;  // plain dr weights; the area weight r is applied by callers
};

// Composite Gauss rule on [0, R]: `pts` points on each of `panels` equal panels.
inline RadialRule radial_rule(double R, int pts = 16, int panels = 64) {
    if (!(R > 0.0)) throw DomainError("radial_rule: radius must be positive");
    Eigen::VectorXd gx, gw;
    gauss_legendre(pts, gx, gw);
    RadialRule rule;
    rule.r.resize(pts * panels);
    rule.w.resize(pts * panels);
    const double dh = R / double(panels);
    for (int p = 0; p < panels; ++p) {
        const double mid = (double(p) + 0.5) * dh;
        for (int i = 0; i < pts; ++i) {
            rule.r[p * pts + i] = mid + 0.5 * dh * gx[i];
            rule.w[p * pts + i] = 0.5 * dh * gw[i];
        }
    }
    return rule;
}

}  // namespace gp
