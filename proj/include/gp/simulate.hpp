#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "gp/disk.hpp"
#include "gp/errors.hpp"
#include "gp/solvers.hpp"

namespace gp {

// Boundary flux moment b_m(t) = int_0^{2pi} v(t, alpha) (mu/(sqrt(pi) R))
// e^{i m alpha} dalpha, the pairing of the boundary trace with the outward
// normal derivative of phi_nm over the circle (surface element R dalpha
// already folded in). Trapezoid in alpha is exact once the trace resolves
// harmonic m.
inline Eigen::VectorXcd boundary_moment(const Eigen::MatrixXcd& v_samples, int n_alpha,
                                        const Mode& mode, const DiskGeometry& geom) {
    if (n_alpha < 1 || v_samples.cols() != n_alpha)
        throw DomainError("boundary_moment: angular grid mismatch");
    const double dalpha = 2.0 * M_PI / double(n_alpha);
    const double factor = mode.mu / (std::sqrt(M_PI) * geom.R);
    Eigen::VectorXcd phase(n_alpha);
    for (int k = 0; k < n_alpha; ++k)
        phase[k] = std::exp(Complex(0.0, mode.m * 2.0 * M_PI * double(k) / double(n_alpha)));
    return (v_samples * phase) * (dalpha * factor);
}

struct FieldSnapshot {
    double t = 0.0;
    PolarField field;  // real part of theta
    Eigen::VectorXcd coeffs;
    double l2_norm = 0.0;
};

struct DiskSimulation {
    double h = 0.0;
    std::vector<double> norms;  // coefficient l2 norm at every grid time
    std::vector<FieldSnapshot> snapshots;
    double truncation_tail = 0.0;  // relative l2 mass of xi outside the mode set
    std::vector<std::string> solver_tags;
};

using SpaceTimeFunction = std::function<Complex(double t, double r, double alpha)>;

// Projects the data onto the mode set, advances every modal problem
// independently (exp-sum kernels by the exact propagator, anything else by
// convolution quadrature), and reassembles the requested snapshots. Modes
// are distributed over `threads` workers and merged by index, so the result
// does not depend on the degree of parallelism.
inline DiskSimulation simulate_disk(const DiskGeometry& geom, const MemoryKernel& kernel,
                                    const PolarField& xi_field, const SpaceTimeFunction& u,
                                    const std::vector<Mode>& modes, double T, double h,
                                    const std::vector<double>& snapshot_times = {},
                                    int threads = 1) {
    if (modes.empty()) throw DomainError("simulate_disk: empty mode set");
    const Eigen::VectorXcd xi = project(xi_field, modes, geom);

    const bool exact_ok = std::holds_alternative<ExpSum>(kernel);
    double h_eff = h;
    const Eigen::Index nsteps = detail::step_count(T, h_eff);

    // Forcing coefficients per mode, sampled on the time grid up front.
    Eigen::MatrixXcd u_coeffs;
    if (u) {
        u_coeffs.resize(Eigen::Index(modes.size()), nsteps + 1);
        PolarField slice = xi_field;
        for (Eigen::Index i = 0; i <= nsteps; ++i) {
            const double t = double(i) * h_eff;
            for (Eigen::Index a = 0; a < slice.r.size(); ++a)
                for (int k = 0; k < slice.n_alpha; ++k)
                    slice.values(a, k) = u(t, slice.r[a], slice.alpha(k));
            u_coeffs.col(i) = project(slice, modes, geom);
        }
    }

    std::vector<ModalTrajectory> trajectories(modes.size());
    auto solve_range = [&](size_t lo, size_t hi) {
        for (size_t j = lo; j < hi; ++j) {
            ModalProblem problem;
            problem.mode = modes[j];
            problem.kernel = kernel;
            problem.xi = xi[Eigen::Index(j)];
            if (u) {
                const Eigen::VectorXcd row = u_coeffs.row(Eigen::Index(j));
                problem.u = [row, h_eff, nsteps](double t) {
                    // Piecewise-linear read-back of the sampled coefficients.
                    const double s = std::clamp(t / h_eff, 0.0, double(nsteps));
                    const auto i0 = std::min(Eigen::Index(s), nsteps - 1);
                    const double w = s - double(i0);
                    return (1.0 - w) * row[i0] + w * row[i0 + 1];
                };
            }
            trajectories[j] = exact_ok ? solve_modal_exact(problem, T, h_eff)
                                       : solve_modal_quadrature(problem, T, h_eff);
        }
    };

    const int nthreads = std::max(1, std::min<int>(threads, int(modes.size())));
    if (nthreads == 1) {
        solve_range(0, modes.size());
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(nthreads));
        const size_t chunk = (modes.size() + size_t(nthreads) - 1) / size_t(nthreads);
        for (int w = 0; w < nthreads; ++w) {
            const size_t lo = size_t(w) * chunk;
            const size_t hi = std::min(modes.size(), lo + chunk);
            if (lo < hi)
                pool.emplace_back([&, lo, hi, w] {
                    try {
                        solve_range(lo, hi);
                    } catch (...) {
                        errors[size_t(w)] = std::current_exception();
                    }
                });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    DiskSimulation sim;
    sim.h = h_eff;
    for (const auto& traj : trajectories) sim.solver_tags.push_back(traj.solver);

    sim.norms.resize(size_t(nsteps) + 1);
    Eigen::VectorXcd slice_coeffs(Eigen::Index(modes.size()));
    for (Eigen::Index i = 0; i <= nsteps; ++i) {
        for (size_t j = 0; j < modes.size(); ++j)
            slice_coeffs[Eigen::Index(j)] = trajectories[j].values[i];
        sim.norms[size_t(i)] = coeff_l2_norm(slice_coeffs, modes);
    }

    const double xi_field_norm = field_l2_norm(xi_field);
    const double xi_coeff_norm = coeff_l2_norm(xi, modes);
    sim.truncation_tail =
        xi_field_norm == 0.0
            ? 0.0
            : std::sqrt(std::max(0.0, xi_field_norm * xi_field_norm -
                                          xi_coeff_norm * xi_coeff_norm)) /
                  xi_field_norm;

    for (double ts : snapshot_times) {
        const auto i = std::clamp<Eigen::Index>(Eigen::Index(std::llround(ts / h_eff)), 0, nsteps);
        FieldSnapshot snap;
        snap.t = double(i) * h_eff;
        snap.coeffs.resize(Eigen::Index(modes.size()));
        for (size_t j = 0; j < modes.size(); ++j)
            snap.coeffs[Eigen::Index(j)] = trajectories[j].values[i];
        snap.field = xi_field;
        reconstruct_real(snap.coeffs, modes, geom, snap.field);
        snap.l2_norm = field_l2_norm(snap.field);
        sim.snapshots.push_back(std::move(snap));
    }
    return sim;
}

}  // namespace gp
