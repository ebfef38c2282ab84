#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "gp/disk.hpp"
#include "gp/errors.hpp"
#include "gp/kernel.hpp"
#include "gp/propagator.hpp"
#include "gp/symbol.hpp"

namespace gp {

using TimeFunction = std::function<Complex(double)>;

// One modal coefficient problem:
//   theta' + lambda_sq (K * theta) = u(t) - (K * b)(t),  theta(0) = xi,
// where u is the projected distributed forcing and b the boundary flux
// moment entering through the kernel convolution.
struct ModalProblem {
    Mode mode;
    MemoryKernel kernel;
    Complex xi = 0.0;
    TimeFunction u;  // absent means zero
    TimeFunction b;  // absent means zero
};

struct ModalTrajectory {
    double h = 0.0;
    Eigen::VectorXcd values;
    std::string solver;
    double error_estimate = 0.0;

    double time(Eigen::Index i) const { return h * double(i); }
    Eigen::Index steps() const { return values.size() - 1; }
};

// Resolves the fastest modal oscillation, frequency ~ sqrt(lambda_sq K(0)).
inline double default_step(double lambda_sq_max, double k0) {
    return std::min(0.01, 0.1 / std::sqrt(lambda_sq_max * k0));
}

namespace detail {

inline Eigen::Index step_count(double T, double& h) {
    if (!(h > 0.0)) throw DomainError("modal solver: step must be positive");
    if (!(T > 0.0)) throw DomainError("modal solver: horizon must be positive");
    const auto n = Eigen::Index(std::ceil(T / h - 1e-9));
    h = T / double(n);
    return n;
}

}  // namespace detail

// Exact-propagator solver for exp-sum kernels. The memory integral is
// unfolded into auxiliary states z_j = int_0^t e^{-gamma_j (t-s)} theta ds
// and the boundary convolution into w_j driven by b, giving a constant
// linear system advanced by the Van Loan step operator. The only
// discretization left is the piecewise-linear reading of u and b between
// grid points.
inline ModalTrajectory solve_modal_exact(const ModalProblem& problem, double T, double h) {
    const auto* exp_sum = std::get_if<ExpSum>(&problem.kernel);
    if (!exp_sum)
        throw UnsupportedVariantError("solve_modal_exact: kernel must be an exponential sum");
    const Eigen::Index nsteps = detail::step_count(T, h);
    const Eigen::Index nk = exp_sum->c.size();
    const double lam = problem.mode.lambda_sq;
    const bool with_boundary = bool(problem.b);

    const Eigen::Index dim = 1 + nk + (with_boundary ? nk : 0);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < nk; ++j) {
        A(0, 1 + j) = -lam * exp_sum->c[j];
        A(1 + j, 0) = 1.0;
        A(1 + j, 1 + j) = -exp_sum->gamma[j];
        if (with_boundary) {
            A(0, 1 + nk + j) = -exp_sum->c[j];
            A(1 + nk + j, 1 + nk + j) = -exp_sum->gamma[j];
        }
    }
    const StepOperator op = make_step_operator(A, h);

    auto forcing = [&](double t) {
        Eigen::VectorXcd g = Eigen::VectorXcd::Zero(dim);
        if (problem.u) g[0] = problem.u(t);
        if (with_boundary) {
            const Complex bt = problem.b(t);
            for (Eigen::Index j = 0; j < nk; ++j) g[1 + nk + j] = bt;
        }
        return g;
    };

    ModalTrajectory traj;
    traj.h = h;
    traj.solver = "exact";
    traj.values.resize(nsteps + 1);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
    x[0] = problem.xi;
    traj.values[0] = problem.xi;
    Eigen::VectorXcd g0 = forcing(0.0);
    for (Eigen::Index i = 0; i < nsteps; ++i) {
        const Eigen::VectorXcd g1 = forcing(double(i + 1) * h);
        x = step(op, x, g0, g1);
        traj.values[i + 1] = x[0];
        g0 = g1;
    }
    return traj;
}

// Trapezoidal convolution quadrature for the memory integral combined with
// Crank-Nicolson in time; the implicit scalar equation is solved in closed
// form. Second order in h for any kernel variant.
inline ModalTrajectory solve_modal_quadrature(const ModalProblem& problem, double T, double h) {
    const Eigen::Index nsteps = detail::step_count(T, h);
    const double lam = problem.mode.lambda_sq;

    Eigen::VectorXd K(nsteps + 1);
    for (Eigen::Index i = 0; i <= nsteps; ++i) K[i] = eval_kernel(problem.kernel, double(i) * h);

    // Effective forcing f = u - K * b on the grid.
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(nsteps + 1);
    if (problem.u)
        for (Eigen::Index i = 0; i <= nsteps; ++i) f[i] = problem.u(double(i) * h);
    if (problem.b) {
        Eigen::VectorXcd b(nsteps + 1);
        for (Eigen::Index i = 0; i <= nsteps; ++i) b[i] = problem.b(double(i) * h);
        for (Eigen::Index i = 1; i <= nsteps; ++i) {
            Complex s = 0.5 * (K[i] * b[0] + K[0] * b[i]);
            for (Eigen::Index j = 1; j < i; ++j) s += K[i - j] * b[j];
            f[i] -= h * s;
        }
    }

    ModalTrajectory traj;
    traj.h = h;
    traj.solver = "quadrature";
    traj.values.resize(nsteps + 1);
    traj.values[0] = problem.xi;

    Eigen::VectorXcd conv = Eigen::VectorXcd::Zero(nsteps + 1);
    const double denom = 1.0 + 0.25 * h * h * lam * K[0];
    for (Eigen::Index i = 0; i < nsteps; ++i) {
        // Trapezoid value of (K * theta)(t_{i+1}) split into the part known
        // now and the implicit 0.5 h K(0) theta_{i+1} tail.
        Complex s = 0.5 * K[i + 1] * traj.values[0];
        for (Eigen::Index j = 1; j <= i; ++j) s += K[i + 1 - j] * traj.values[j];
        const Complex known = h * s;
        const Complex rate_i = -lam * conv[i] + f[i];
        traj.values[i + 1] =
            (traj.values[i] + 0.5 * h * (rate_i + f[i + 1] - lam * known)) / denom;
        conv[i + 1] = known + 0.5 * h * K[0] * traj.values[i + 1];
    }
    return traj;
}

struct ResidueExpansion {
    std::vector<Complex> roots;
    std::vector<Complex> weights;  // den(Khat)(root) / p'(root)
};

// Partial-fraction expansion of 1/(lambda + lambda_sq Khat): simple poles at
// the characteristic roots with residues den(root)/p'(root). Their sum is 1
// because deg p = deg den + 1.
inline ResidueExpansion residue_expansion(const MemoryKernel& kernel, double lambda_sq) {
    const RationalFunction khat = laplace_transform(kernel);
    const Eigen::VectorXd p = characteristic_polynomial(kernel, lambda_sq);
    const Eigen::VectorXd dp = poly_derivative(p);
    ResidueExpansion ex;
    ex.roots = poly_roots(p);

    double scale = 1.0;
    for (const Complex& r : ex.roots) scale = std::max(scale, std::abs(r));
    for (size_t i = 0; i < ex.roots.size(); ++i)
        for (size_t j = i + 1; j < ex.roots.size(); ++j)
            if (std::abs(ex.roots[i] - ex.roots[j]) < 1e-6 * scale) {
                std::ostringstream os;
                os << "residue_expansion: characteristic roots closer than 1e-6 x scale "
                      "(separation "
                   << std::abs(ex.roots[i] - ex.roots[j])
                   << "); use a time-domain solver";
                throw DegenerateSpectrumError(os.str());
            }

    ex.weights.resize(ex.roots.size());
    for (size_t i = 0; i < ex.roots.size(); ++i)
        ex.weights[i] = poly_eval(khat.den, ex.roots[i]) / poly_eval(dp, ex.roots[i]);
    return ex;
}

// theta(t) = xi sum_i w_i exp(root_i t), the inverse transform of
// xi/(lambda + lambda_sq Khat) for the unforced problem.
inline Complex residue_solution(const MemoryKernel& kernel, double lambda_sq, Complex xi,
                                double t) {
    if (t < 0.0) throw DomainError("residue_solution: negative time");
    const ResidueExpansion ex = residue_expansion(kernel, lambda_sq);
    Complex acc(0.0);
    for (size_t i = 0; i < ex.roots.size(); ++i)
        acc += ex.weights[i] * std::exp(ex.roots[i] * t);
    return xi * acc;
}

}  // namespace gp
