#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <variant>
#include <vector>

#include "gp/errors.hpp"
#include "gp/rational.hpp"

namespace gp {

// K(t) = sum_j c_j exp(-gamma_j t), all c_j > 0, gamma_j > 0 and pairwise
// distinct.
struct ExpSum {
    Eigen::VectorXd c;
    Eigen::VectorXd gamma;
};

struct Constant {
    double C;
};

// Uniform samples K(i * h), i = 0..n-1.
struct Tabulated {
    Eigen::VectorXd samples;
    double h;
};

using MemoryKernel = std::variant<ExpSum, Constant, Tabulated>;

inline MemoryKernel make_exp_sum(const Eigen::VectorXd& c, const Eigen::VectorXd& gamma) {
    if (c.size() == 0 || c.size() != gamma.size())
        throw DomainError("exp-sum kernel: need matching nonempty amplitude and rate lists");
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        if (!(c[j] > 0.0)) throw DomainError("exp-sum kernel: amplitudes must be positive");
        if (!(gamma[j] > 0.0)) throw DomainError("exp-sum kernel: decay rates must be positive");
    }
    for (Eigen::Index i = 0; i < gamma.size(); ++i)
        for (Eigen::Index j = i + 1; j < gamma.size(); ++j)
            if (gamma[i] == gamma[j]) {
                std::ostringstream os;
                os << "exp-sum kernel: duplicate decay rate " << gamma[i];
                throw DomainError(os.str());
            }
    return ExpSum{c, gamma};
}

inline MemoryKernel make_constant(double C) {
    if (!(C > 0.0)) throw DomainError("constant kernel: C must be positive");
    return Constant{C};
}

inline MemoryKernel make_tabulated(const Eigen::VectorXd& samples, double h) {
    if (samples.size() < 4)
        throw DomainError("tabulated kernel: need at least 4 samples");
    if (!(h > 0.0)) throw DomainError("tabulated kernel: step must be positive");
    if (!(samples[0] > 0.0))
        throw DomainError("tabulated kernel: K(0) must be positive");
    return Tabulated{samples, h};
}

inline double kernel_k0(const MemoryKernel& k) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ExpSum>) return v.c.sum();
            else if constexpr (std::is_same_v<T, Constant>) return v.C;
            else return v.samples[0];
        },
        k);
}

inline double eval_kernel(const MemoryKernel& k, double t) {
    if (t < 0.0) throw DomainError("eval_kernel: negative time");
    return std::visit(
        [t](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ExpSum>) {
                double s = 0.0;
                for (Eigen::Index j = 0; j < v.c.size(); ++j)
                    s += v.c[j] * std::exp(-v.gamma[j] * t);
                return s;
            } else if constexpr (std::is_same_v<T, Constant>) {
                return v.C;
            } else {
                const Eigen::Index n = v.samples.size();
                const double tmax = double(n - 1) * v.h;
                if (t > tmax * (1.0 + 1e-12))
                    throw RangeError("eval_kernel: t beyond tabulated range");
                // 4-point Lagrange on the nearest stencil, one-sided at the ends.
                double u = std::min(t / v.h, double(n - 1));
                Eigen::Index i0 = Eigen::Index(std::floor(u)) - 1;
                i0 = std::max<Eigen::Index>(0, std::min(i0, n - 4));
                const double x = u - double(i0);
                double out = 0.0;
                for (int a = 0; a < 4; ++a) {
                    double w = 1.0;
                    for (int b = 0; b < 4; ++b)
                        if (b != a) w *= (x - b) / double(a - b);
                    out += w * v.samples[i0 + a];
                }
                return out;
            }
        },
        k);
}

// Laplace transform as a rational function. ExpSum assembles
// sum_j c_j/(lambda+gamma_j) over the common denominator prod(lambda+gamma_j);
// Constant(C) gives C/lambda.
inline RationalFunction laplace_transform(const MemoryKernel& k) {
    if (std::holds_alternative<Tabulated>(k))
        throw UnsupportedVariantError(
            "laplace_transform: tabulated kernels have no rational transform; "
            "use the time-domain quadrature solver");
    if (const auto* c = std::get_if<Constant>(&k)) {
        Eigen::VectorXd num(1), den(2);
        num << c->C;
        den << 0.0, 1.0;
        return make_rational(num, den);
    }
    const auto& e = std::get<ExpSum>(k);
    Eigen::VectorXd den(1);
    den << 1.0;
    for (Eigen::Index j = 0; j < e.gamma.size(); ++j) {
        Eigen::VectorXd lin(2);
        lin << e.gamma[j], 1.0;
        den = poly_mul(den, lin);
    }
    Eigen::VectorXd num = Eigen::VectorXd::Zero(std::max<Eigen::Index>(1, e.c.size()));
    for (Eigen::Index j = 0; j < e.c.size(); ++j) {
        Eigen::VectorXd part(1);
        part << e.c[j];
        for (Eigen::Index l = 0; l < e.gamma.size(); ++l) {
            if (l == j) continue;
            Eigen::VectorXd lin(2);
            lin << e.gamma[l], 1.0;
            part = poly_mul(part, lin);
        }
        num.head(part.size()) += part;
    }
    return make_rational(num, den);
}

inline Complex eval_khat(const MemoryKernel& k, Complex lambda) {
    if (const auto* c = std::get_if<Constant>(&k)) {
        if (std::abs(lambda) == 0.0)
            throw PoleError("eval_khat: lambda = 0 is a pole of the constant kernel", 0.0);
        return Complex(c->C) / lambda;
    }
    if (const auto* e = std::get_if<ExpSum>(&k)) {
        Complex s(0.0);
        for (Eigen::Index j = 0; j < e->c.size(); ++j) {
            const Complex d = lambda + e->gamma[j];
            if (std::abs(d) == 0.0)
                throw PoleError("eval_khat: lambda is a pole", Complex(-e->gamma[j]));
            s += e->c[j] / d;
        }
        return s;
    }
    throw UnsupportedVariantError("eval_khat: tabulated kernels have no rational transform");
}

// Zeros of the transform's numerator. For an N-term exp-sum with positive
// amplitudes these are N-1 real points interlacing the poles; Newton on the
// numerator sharpens the companion-matrix values.
inline std::vector<Complex> khat_zeros(const MemoryKernel& k) {
    const RationalFunction f = laplace_transform(k);
    if (f.num.size() <= 1) return {};
    std::vector<Complex> zs = poly_roots(f.num);
    const Eigen::VectorXd dnum = poly_derivative(f.num);
    for (Complex& z : zs) {
        for (int it = 0; it < 2; ++it) {
            const Complex dp = poly_eval(dnum, z);
            if (std::abs(dp) == 0.0) break;
            z -= poly_eval(f.num, z) / dp;
        }
    }
    return zs;
}

}  // namespace gp
