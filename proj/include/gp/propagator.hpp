#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "gp/errors.hpp"

namespace gp {

// One-step operator for x' = A x + g(t) with g piecewise linear between
// samples: x(t+h) = E x(t) + F1 g(t) + F2 (g(t+h) - g(t))/h, where
//   E  = exp(A h),
//   F1 = int_0^h exp(A s) ds,
//   F2 = int_0^h exp(A s) (h - s) ds.
// All three fall out of one exponential of the block matrix
// [[A, I, 0], [0, 0, I], [0, 0, 0]] scaled by h. The update is exact
// whenever the forcing really is linear on the step.
struct StepOperator {
    Eigen::MatrixXd E, F1, F2;
    double h;
};

inline StepOperator make_step_operator(const Eigen::MatrixXd& A, double h) {
    if (!(h > 0.0)) throw DomainError("make_step_operator: step must be positive");
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw DomainError("make_step_operator: A must be square");

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    block.topLeftCorner(n, n) = A;
    block.block(0, n, n, n).setIdentity();
    block.block(n, 2 * n, n, n).setIdentity();
    const Eigen::MatrixXd eb = (block * h).exp();

    StepOperator op;
    op.E = eb.topLeftCorner(n, n);
    op.F1 = eb.block(0, n, n, n);
    op.F2 = eb.block(0, 2 * n, n, n);
    op.h = h;
    return op;
}

// Real operator applied to complex state.
inline Eigen::VectorXcd apply_real(const Eigen::MatrixXd& M, const Eigen::VectorXcd& x) {
    return (M * x.real()).cast<Complex>() + Complex(0.0, 1.0) * (M * x.imag()).cast<Complex>();
}

inline Eigen::VectorXcd step(const StepOperator& op, const Eigen::VectorXcd& x,
                             const Eigen::VectorXcd& g0, const Eigen::VectorXcd& g1) {
    return apply_real(op.E, x) + apply_real(op.F1, g0) + apply_real(op.F2, (g1 - g0) / op.h);
}

}  // namespace gp
