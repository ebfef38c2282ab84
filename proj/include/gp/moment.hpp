#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gp/disk.hpp"
#include "gp/errors.hpp"
#include "gp/kernel.hpp"
#include "gp/symbol.hpp"

namespace gp {

// Finite moment problem: find v on (0, T) with
//   int_0^T v(t) e^{-lambda_k t} dt = rhs_k  for every k.
struct MomentSystem {
    Eigen::VectorXcd points;
    Eigen::VectorXcd rhs;
    double T = 0.0;
    std::vector<std::pair<int, int>> constraint_modes;  // (m, n) per constraint
    double min_separation = 0.0;
};

// Value the transformed control must take at a characteristic root lambda:
// -(1/2pi) mu xi / (R^2 lambda).
inline Complex moment_rhs(const Mode& mode, Complex xi, Complex lambda,
                          const DiskGeometry& geom) {
    if (std::abs(lambda) == 0.0)
        throw DomainError("moment_rhs: lambda = 0 is excluded");
    return -(1.0 / (2.0 * M_PI)) * mode.mu * xi / (geom.R * geom.R * lambda);
}

// Initial coefficients xi_{n,1} that vanish for odd n and are 1 for even n;
// the alternation forces the interpolation conflict at clustered points.
inline Eigen::VectorXcd lemma1_scenario(int n_max) {
    if (n_max < 2) throw DomainError("lemma1_scenario: need n_max >= 2");
    Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(n_max);
    for (int n = 2; n <= n_max; n += 2) xi[n - 1] = 1.0;
    return xi;
}

// One interpolation constraint per radial index n. Kernels whose transform
// has nonzero zeros get the clustered points (the tracked root nearest the
// zero with largest real part); kernels without such zeros get the root
// with the smallest positive imaginary part, which stays separated.
inline MomentSystem build_moment_system(const MemoryKernel& kernel, int m,
                                        const Eigen::VectorXcd& xi, int n_lo, int n_hi,
                                        const DiskGeometry& geom, double T) {
    if (!(T > 0.0)) throw DomainError("build_moment_system: horizon must be positive");
    if (n_lo < 1 || n_hi < n_lo || n_hi > xi.size())
        throw DomainError("build_moment_system: bad radial index range");

    const std::vector<Complex> zeros = khat_zeros(kernel);
    MomentSystem sys;
    sys.T = T;
    const int count = n_hi - n_lo + 1;
    sys.points.resize(count);
    sys.rhs.resize(count);

    if (!zeros.empty()) {
        Complex target = zeros.front();
        for (const Complex& z : zeros)
            if (z.real() > target.real()) target = z;
        const RootSequence seq = root_sequence(kernel, m, n_lo, n_hi, geom, target);
        for (int i = 0; i < count; ++i) sys.points[i] = seq.entries[size_t(i)].root;
    } else {
        for (int n = n_lo; n <= n_hi; ++n) {
            const Mode mode = make_mode(m, n, geom);
            const std::vector<Complex> roots = characteristic_roots(kernel, mode.lambda_sq);
            Complex pick = roots.front();
            double best = std::numeric_limits<double>::infinity();
            for (const Complex& r : roots)
                if (r.imag() > 0.0 && r.imag() < best) {
                    best = r.imag();
                    pick = r;
                }
            sys.points[n - n_lo] = pick;
        }
    }

    for (int n = n_lo; n <= n_hi; ++n) {
        const Mode mode = make_mode(m, n, geom);
        sys.rhs[n - n_lo] = moment_rhs(mode, xi[n - 1], sys.points[n - n_lo], geom);
        sys.constraint_modes.emplace_back(m, n);
    }

    sys.min_separation = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j) {
            const double d = std::abs(sys.points[i] - sys.points[j]);
            if (d == 0.0)
                throw DomainError("build_moment_system: coincident interpolation points");
            sys.min_separation = std::min(sys.min_separation, d);
        }
    return sys;
}

struct MinNormResult {
    Eigen::VectorXcd coeffs;
    double norm = 0.0;
    double condition = 1.0;
    bool singular = false;
    int cut_count = 0;
    double max_residual = 0.0;  // ||G a - rhs||_inf / max(1, ||rhs||_inf)
};

// Minimum L2(0,T)-norm interpolant from the span of the representer
// functions e^{-conj(lambda_k) t}: solve G a = rhs with the Hermitian Gram
// matrix G_jk = (1 - e^{-sT})/s, s = lambda_j + conj(lambda_k). Solving via
// the spectral decomposition, eigenvalues below cutoff_rel * max are
// dropped and the singularity flag is raised; the achieved constraint
// residual is always reported alongside.
inline MinNormResult min_norm_control(const MomentSystem& sys, double cutoff_rel = 1e-14) {
    const Eigen::Index n = sys.points.size();
    if (n == 0) throw DomainError("min_norm_control: empty moment system");

    auto gram_entry = [&](Complex s) -> Complex {
        if (std::abs(s) * sys.T < 1e-6) {
            const Complex z = s * sys.T;
            return sys.T * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0);
        }
        return (1.0 - std::exp(-s * sys.T)) / s;
    };

    Eigen::MatrixXcd G(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = j; k < n; ++k) {
            const Complex g = gram_entry(sys.points[j] + std::conj(sys.points[k]));
            G(j, k) = g;
            G(k, j) = std::conj(g);
        }
        G(j, j) = Complex(G(j, j).real(), 0.0);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("min_norm_control: Gram eigen decomposition failed");
    const Eigen::VectorXd w = es.eigenvalues();
    const double wmax = w[n - 1];
    if (!(wmax > 0.0))
        throw ConvergenceError("min_norm_control: Gram matrix has no positive spectrum");
    const double cutoff = cutoff_rel * wmax;

    MinNormResult res;
    res.coeffs = Eigen::VectorXcd::Zero(n);
    double norm_sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (w[i] <= cutoff) {
            ++res.cut_count;
            continue;
        }
        const Complex c = es.eigenvectors().col(i).adjoint() * sys.rhs;
        res.coeffs += (c / w[i]) * es.eigenvectors().col(i);
        norm_sq += std::norm(c) / w[i];
    }
    res.norm = std::sqrt(norm_sq);
    res.singular = res.cut_count > 0;
    const double wmin_abs = std::abs(w[0]);
    res.condition = wmin_abs > wmax * 1e-300 ? wmax / wmin_abs : 1e300;

    const double rhs_scale = std::max(1.0, sys.rhs.cwiseAbs().maxCoeff());
    res.max_residual = (G * res.coeffs - sys.rhs).cwiseAbs().maxCoeff() / rhs_scale;
    return res;
}

struct CertifyThresholds {
    // Regime separators frozen from the first oracle run of the paired
    // experiment; the cutoff keeps only Gram modes resolved in double
    // precision.
    double cluster_eps = 0.1;
    double obstruction_growth = 4.0;
    double unobstructed_bound = 10.0;
    double cutoff_rel = 1e-14;
};

struct CertificationReport {
    std::vector<int> counts;
    std::vector<double> norms;
    std::vector<double> conditions;
    std::vector<double> residuals;
    std::vector<int> cut_counts;
    double cluster_diameter = 0.0;  // of the last half of the largest point set
    double min_separation = 0.0;
    std::string verdict;
    CertifyThresholds thresholds;
};

// Paired-experiment driver: min-norm controls over a nested schedule of
// constraint counts, verdict from point clustering plus norm growth.
inline CertificationReport certify(const MemoryKernel& kernel, const DiskGeometry& geom,
                                   double T, const std::vector<int>& schedule,
                                   const CertifyThresholds& thresholds = {},
                                   const Eigen::VectorXcd& xi_override = {}) {
    if (schedule.empty()) throw DomainError("certify: empty schedule");
    for (size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw DomainError("certify: schedule must be strictly increasing");
    if (schedule.front() < 2) throw DomainError("certify: schedule counts must be >= 2");

    const int n_max = schedule.back();
    if (xi_override.size() != 0 && xi_override.size() < n_max)
        throw DomainError("certify: xi override shorter than the largest schedule entry");
    const Eigen::VectorXcd xi =
        xi_override.size() != 0 ? xi_override : lemma1_scenario(n_max);

    CertificationReport report;
    report.thresholds = thresholds;
    MomentSystem largest;
    for (int count : schedule) {
        const MomentSystem sys = build_moment_system(kernel, 1, xi, 1, count, geom, T);
        const MinNormResult res = min_norm_control(sys, thresholds.cutoff_rel);
        report.counts.push_back(count);
        report.norms.push_back(res.norm);
        report.conditions.push_back(res.condition);
        report.residuals.push_back(res.max_residual);
        report.cut_counts.push_back(res.cut_count);
        if (count == n_max) largest = sys;
    }

    const Eigen::Index half = largest.points.size() / 2;
    double diam = 0.0;
    for (Eigen::Index i = half; i < largest.points.size(); ++i)
        for (Eigen::Index j = i + 1; j < largest.points.size(); ++j)
            diam = std::max(diam, std::abs(largest.points[i] - largest.points[j]));
    report.cluster_diameter = diam;
    report.min_separation = largest.min_separation;

    const double first = report.norms.front();
    const double last = report.norms.back();
    bool monotone = true;
    for (size_t i = 1; i < report.norms.size(); ++i)
        if (report.norms[i] < report.norms[i - 1] * (1.0 - 1e-9)) monotone = false;
    const bool clustered = diam < thresholds.cluster_eps;
    const double growth = first > 0.0 ? last / first : (last > 0.0 ? 1e300 : 1.0);

    bool all_zero = true;
    for (double v : report.norms)
        if (v != 0.0) all_zero = false;

    if (all_zero)
        report.verdict = "unobstructed";
    else if (clustered && monotone && growth >= thresholds.obstruction_growth)
        report.verdict = "obstructed";
    else if (!clustered && growth <= thresholds.unobstructed_bound)
        report.verdict = "unobstructed";
    else
        report.verdict = "inconclusive";
    return report;
}

}  // namespace gp
