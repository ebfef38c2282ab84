#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "gp/errors.hpp"
#include "gp/polynomial.hpp"
#include "gp/propagator.hpp"
#include "gp/solvers.hpp"

namespace gp {

// Modal damped wave problem theta'' + gamma theta' + q omega^2 theta = P(t).
struct DampedWaveProblem {
    double q = 0.0;
    double gamma = 0.0;
    double omega = 0.0;
    TimeFunction P;
    Complex theta0 = 0.0;
    Complex theta1 = 0.0;
    int derivative_order = 0;  // 0 when P came from an exact derivative of u
};

// Reduction of the single-exponential memory problem
//   theta' + omega^2 (q e^{-gamma t} * theta) = u
// obtained by differentiating once: theta'' + gamma theta' + q omega^2 theta
// = u' + gamma u, with theta'(0) = u(0) because the memory integral is empty
// at t = 0.
inline DampedWaveProblem gp_to_damped_wave(double q, double gamma, const TimeFunction& u,
                                           const TimeFunction& du, double omega,
                                           Complex theta0) {
    if (!(q > 0.0) || !(gamma > 0.0) || !(omega > 0.0))
        throw DomainError("gp_to_damped_wave: q, gamma, omega must be positive");
    DampedWaveProblem p;
    p.q = q;
    p.gamma = gamma;
    p.omega = omega;
    p.theta0 = theta0;
    p.theta1 = u ? u(0.0) : Complex(0.0);
    if (u) {
        if (!du) throw DomainError("gp_to_damped_wave: derivative of u required");
        p.P = [u, du, gamma](double t) { return du(t) + gamma * u(t); };
    }
    return p;
}

// Same reduction from sampled forcing; the derivative is taken by central
// differences (one-sided at the ends), so P carries a second-order tag.
inline DampedWaveProblem gp_to_damped_wave_sampled(double q, double gamma,
                                                   const Eigen::VectorXcd& u_samples,
                                                   double h, double omega, Complex theta0) {
    if (u_samples.size() < 3)
        throw DomainError("gp_to_damped_wave_sampled: need at least 3 samples");
    if (!(h > 0.0)) throw DomainError("gp_to_damped_wave_sampled: bad sample step");
    const Eigen::Index n = u_samples.size();
    Eigen::VectorXcd du(n);
    du[0] = (-1.5 * u_samples[0] + 2.0 * u_samples[1] - 0.5 * u_samples[2]) / h;
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        du[i] = (u_samples[i + 1] - u_samples[i - 1]) / (2.0 * h);
    du[n - 1] = (1.5 * u_samples[n - 1] - 2.0 * u_samples[n - 2] + 0.5 * u_samples[n - 3]) / h;

    auto sample = [h, n](const Eigen::VectorXcd& v, double t) {
        const double s = std::clamp(t / h, 0.0, double(n - 1));
        const auto i0 = std::min(Eigen::Index(s), n - 2);
        const double w = s - double(i0);
        return (1.0 - w) * v[i0] + w * v[i0 + 1];
    };

    DampedWaveProblem p;
    p.q = q;
    p.gamma = gamma;
    p.omega = omega;
    p.theta0 = theta0;
    p.theta1 = u_samples[0];
    p.derivative_order = 2;
    Eigen::VectorXcd us = u_samples;
    p.P = [us, du, sample, gamma](double t) { return sample(du, t) + gamma * sample(us, t); };
    return p;
}

inline ModalTrajectory simulate_damped_wave(const DampedWaveProblem& problem, double T,
                                            double h) {
    if (!(problem.gamma >= 0.0) || !(problem.omega > 0.0))
        throw DomainError("simulate_damped_wave: bad coefficients");
    const Eigen::Index nsteps = detail::step_count(T, h);

    Eigen::MatrixXd A(2, 2);
    A << 0.0, 1.0, -problem.q * problem.omega * problem.omega, -problem.gamma;
    const StepOperator op = make_step_operator(A, h);

    ModalTrajectory traj;
    traj.h = h;
    traj.solver = "damped_wave";
    traj.values.resize(nsteps + 1);
    Eigen::VectorXcd x(2);
    x << problem.theta0, problem.theta1;
    traj.values[0] = x[0];
    auto forcing = [&](double t) {
        Eigen::VectorXcd g = Eigen::VectorXcd::Zero(2);
        if (problem.P) g[1] = problem.P(t);
        return g;
    };
    Eigen::VectorXcd g0 = forcing(0.0);
    for (Eigen::Index i = 0; i < nsteps; ++i) {
        const Eigen::VectorXcd g1 = forcing(double(i + 1) * h);
        x = step(op, x, g0, g1);
        traj.values[i + 1] = x[0];
        g0 = g1;
    }
    return traj;
}

// Sign with which the memory flux enters the wave equation
// theta_tt - alpha theta_xx -+ q theta_xx * e^{-gamma t} = 0.
// `relaxing` lets the memory erode the elastic modulus, giving the modal
// characteristic cubic s^3 + gamma s^2 + alpha omega^2 s + (alpha gamma - q)
// omega^2; `reinforcing` keeps the raw sign, flipping q in the constant
// term. Both are exposed because the two lead to mirrored stability ranges.
enum class CouplingSign { relaxing, reinforcing };

inline std::array<double, 3> memory_wave_cubic(double alpha, double q, double gamma,
                                               double omega_sq,
                                               CouplingSign sign = CouplingSign::relaxing) {
    if (!(alpha > 0.0) || !(gamma > 0.0) || !(omega_sq > 0.0))
        throw DomainError("memory_wave_cubic: alpha, gamma, omega_sq must be positive");
    const double a2 = gamma;
    const double a1 = alpha * omega_sq;
    const double a0 = sign == CouplingSign::relaxing ? (alpha * gamma - q) * omega_sq
                                                     : (alpha * gamma + q) * omega_sq;
    return {a2, a1, a0};
}

// Strict left-half-plane test for s^3 + a2 s^2 + a1 s + a0.
inline bool routh_hurwitz_cubic(double a2, double a1, double a0) {
    return a2 > 0.0 && a0 > 0.0 && a2 * a1 > a0;
}

inline double max_root_real_part(double alpha, double q, double gamma, double omega_sq,
                                 CouplingSign sign = CouplingSign::relaxing) {
    const auto [a2, a1, a0] = memory_wave_cubic(alpha, q, gamma, omega_sq, sign);
    Eigen::VectorXd c(4);
    c << a0, a1, a2, 1.0;
    double re = -std::numeric_limits<double>::infinity();
    for (const Complex& r : poly_roots(c)) re = std::max(re, r.real());
    return re;
}

struct StabilityInterval {
    double lo;  // strict interval (lo, hi); the endpoints themselves are marginal
    double hi;
};

// Under the relaxing sign the Routh margin a2 a1 - a0 equals q omega^2, so
// the verdict is independent of omega^2 and the strict interval is
// 0 < q < alpha gamma for every mode at once.
inline StabilityInterval stability_interval(double alpha, double gamma,
                                            CouplingSign sign = CouplingSign::relaxing) {
    if (!(alpha > 0.0) || !(gamma > 0.0))
        throw DomainError("stability_interval: alpha, gamma must be positive");
    if (sign == CouplingSign::relaxing) return {0.0, alpha * gamma};
    return {-alpha * gamma, 0.0};
}

enum class StabilityClass { stable, marginal, unstable };

inline StabilityClass classify_memory_wave(double alpha, double q, double gamma,
                                           CouplingSign sign = CouplingSign::relaxing) {
    const StabilityInterval iv = stability_interval(alpha, gamma, sign);
    if (q == iv.lo || q == iv.hi) return StabilityClass::marginal;
    if (q > iv.lo && q < iv.hi) return StabilityClass::stable;
    return StabilityClass::unstable;
}

}  // namespace gp
