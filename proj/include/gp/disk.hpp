#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "gp/bessel.hpp"
#include "gp/errors.hpp"
#include "gp/quadrature.hpp"

namespace gp {

struct DiskGeometry {
    double R;
};

inline DiskGeometry make_disk(double R) {
    if (!(R > 0.0)) throw DomainError("disk geometry: radius must be positive");
    return DiskGeometry{R};
}

// Dirichlet eigenpair of the disk Laplacian: angular index m >= 0, radial
// index n >= 1, Bessel zero mu = mu^m_n and eigenvalue (mu/R)^2. Negative
// angular indices are not stored; their eigenfunctions are the complex
// conjugates of the positive-m ones.
struct Mode {
    int m;
    int n;
    double mu;
    double lambda_sq;
};

inline Mode make_mode(int m, int n, const DiskGeometry& geom) {
    const double mu = bessel_zero(m, n);
    return Mode{m, n, mu, (mu / geom.R) * (mu / geom.R)};
}

// m-major listing: (0,1)..(0,n_max), (1,1).., up to m_max.
inline std::vector<Mode> make_modes(int m_max, int n_max, const DiskGeometry& geom) {
    if (m_max < 0 || n_max < 1) throw DomainError("make_modes: bad index bounds");
    std::vector<Mode> modes;
    modes.reserve(size_t(m_max + 1) * size_t(n_max));
    for (int m = 0; m <= m_max; ++m)
        for (int n = 1; n <= n_max; ++n) modes.push_back(make_mode(m, n, geom));
    return modes;
}

// phi_nm(r, alpha) = J_m(mu r/R) e^{i m alpha} / (sqrt(pi) R J_m'(mu)).
// The sign of J_m'(mu) is kept as is.
inline Complex eigenfunction_value(const Mode& mode, const DiskGeometry& geom, double r,
                                   double alpha) {
    if (r < 0.0 || r > geom.R * (1.0 + 1e-12))
        throw DomainError("eigenfunction_value: r outside [0, R]");
    const double radial = bessel_j(mode.m, mode.mu * std::min(r, geom.R) / geom.R);
    const double norm = std::sqrt(M_PI) * geom.R * bessel_j_prime(mode.m, mode.mu);
    return (radial / norm) * std::exp(Complex(0.0, mode.m * alpha));
}

// d(phi_nm)/dr at r = R is (mu/R) J_m'(mu) / (sqrt(pi) R J_m'(mu)): the
// J_m' factors cancel, leaving mu e^{i m alpha} / (sqrt(pi) R^2) regardless
// of the normalization sign.
inline Complex boundary_normal_derivative(const Mode& mode, const DiskGeometry& geom,
                                          double alpha) {
    const double mag = mode.mu / (std::sqrt(M_PI) * geom.R * geom.R);
    return mag * std::exp(Complex(0.0, mode.m * alpha));
}

// Samples on a polar tensor grid: values(i, k) at radius r[i] and angle
// alpha_k = 2 pi k / n_alpha. The radial grid carries its quadrature
// weights so fields can be integrated directly.
struct PolarField {
    Eigen::VectorXd r;
    Eigen::VectorXd r_weights;
    int n_alpha = 0;
    Eigen::MatrixXcd values;

    double alpha(int k) const { return 2.0 * M_PI * double(k) / double(n_alpha); }
};

inline PolarField make_polar_field(const DiskGeometry& geom, int n_alpha, int radial_pts = 16,
                                   int radial_panels = 64) {
    if (n_alpha < 4) throw DomainError("make_polar_field: need at least 4 angular points");
    const RadialRule rule = radial_rule(geom.R, radial_pts, radial_panels);
    PolarField f;
    f.r = rule.r;
    f.r_weights = rule.w;
    f.n_alpha = n_alpha;
    f.values = Eigen::MatrixXcd::Zero(rule.r.size(), n_alpha);
    return f;
}

inline PolarField sample_field(const DiskGeometry& geom,
                               const std::function<Complex(double, double)>& fn, int n_alpha,
                               int radial_pts = 16, int radial_panels = 64) {
    PolarField f = make_polar_field(geom, n_alpha, radial_pts, radial_panels);
    for (Eigen::Index i = 0; i < f.r.size(); ++i)
        for (int k = 0; k < f.n_alpha; ++k) f.values(i, k) = fn(f.r[i], f.alpha(k));
    return f;
}

namespace detail {

inline void check_resolution(const PolarField& field, const std::vector<Mode>& modes) {
    const Mode* worst = nullptr;
    double worst_deficit = 0.0;
    for (const Mode& mode : modes) {
        const double alpha_deficit =
            double(std::max(8, 8 * mode.m)) / double(std::max(1, field.n_alpha));
        const double radial_deficit = double(4 * mode.n) / double(std::max<Eigen::Index>(1, field.r.size()));
        const double deficit = std::max(alpha_deficit, radial_deficit);
        if (deficit > 1.0 && deficit > worst_deficit) {
            worst = &mode;
            worst_deficit = deficit;
        }
    }
    if (worst) {
        std::ostringstream os;
        os << "project: grid (" << field.r.size() << " radial x " << field.n_alpha
           << " angular) under-resolves mode (m=" << worst->m << ", n=" << worst->n << ")";
        throw ResolutionError(os.str());
    }
}

// Radial profile J_m(mu r/R)/(sqrt(pi) R J_m'(mu)) on the field's grid.
inline Eigen::VectorXd radial_profile(const Mode& mode, const DiskGeometry& geom,
                                      const Eigen::VectorXd& r) {
    const double norm = std::sqrt(M_PI) * geom.R * bessel_j_prime(mode.m, mode.mu);
    Eigen::VectorXd prof(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i)
        prof[i] = bessel_j(mode.m, mode.mu * r[i] / geom.R) / norm;
    return prof;
}

}  // namespace detail

// Coefficients <field, phi_nm> = int field conj(phi_nm) r dr dalpha.
// Trapezoid in alpha (exact for the trigonometric factors), composite Gauss
// with the area weight r in the radius.
inline Eigen::VectorXcd project(const PolarField& field, const std::vector<Mode>& modes,
                                const DiskGeometry& geom) {
    detail::check_resolution(field, modes);
    const double dalpha = 2.0 * M_PI / double(field.n_alpha);

    Eigen::VectorXcd coeffs(modes.size());
    for (size_t j = 0; j < modes.size(); ++j) {
        const Mode& mode = modes[j];
        Eigen::VectorXcd phase(field.n_alpha);
        for (int k = 0; k < field.n_alpha; ++k)
            phase[k] = std::exp(Complex(0.0, -mode.m * field.alpha(k)));
        const Eigen::VectorXcd angular = field.values * phase * dalpha;
        const Eigen::VectorXd prof = detail::radial_profile(mode, geom, field.r);
        Complex acc(0.0);
        for (Eigen::Index i = 0; i < field.r.size(); ++i)
            acc += field.r_weights[i] * field.r[i] * prof[i] * angular[i];
        coeffs[Eigen::Index(j)] = acc;
    }
    return coeffs;
}

// Real field from m >= 0 coefficients with the conjugate completion:
// f = sum_{m=0} c phi + 2 Re sum_{m>=1} c phi.
inline void reconstruct_real(const Eigen::VectorXcd& coeffs, const std::vector<Mode>& modes,
                             const DiskGeometry& geom, PolarField& out) {
    out.values.setZero();
    for (size_t j = 0; j < modes.size(); ++j) {
        const Mode& mode = modes[j];
        const Eigen::VectorXd prof = detail::radial_profile(mode, geom, out.r);
        const double mult = mode.m == 0 ? 1.0 : 2.0;
        for (Eigen::Index i = 0; i < out.r.size(); ++i)
            for (int k = 0; k < out.n_alpha; ++k) {
                const Complex term =
                    coeffs[Eigen::Index(j)] * prof[i] * std::exp(Complex(0.0, mode.m * out.alpha(k)));
                out.values(i, k) += mult * term.real();
            }
    }
}

// L2 norm over the disk by the field's own quadrature.
inline double field_l2_norm(const PolarField& field) {
    const double dalpha = 2.0 * M_PI / double(field.n_alpha);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < field.r.size(); ++i) {
        double ring = 0.0;
        for (int k = 0; k < field.n_alpha; ++k) ring += std::norm(field.values(i, k));
        acc += field.r_weights[i] * field.r[i] * ring * dalpha;
    }
    return std::sqrt(acc);
}

// l2 norm of m >= 0 coefficients counting the hidden conjugate partners.
inline double coeff_l2_norm(const Eigen::VectorXcd& coeffs, const std::vector<Mode>& modes) {
    double acc = 0.0;
    for (size_t j = 0; j < modes.size(); ++j) {
        const double mult = modes[j].m == 0 ? 1.0 : 2.0;
        acc += mult * std::norm(coeffs[Eigen::Index(j)]);
    }
    return std::sqrt(acc);
}

}  // namespace gp
