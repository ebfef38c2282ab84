#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <thread>
#include <vector>

#include "gp/disk.hpp"
#include "gp/errors.hpp"
#include "gp/kernel.hpp"

namespace gp {

// p(lambda) = lambda * den(Khat) + lambda_sq * num(Khat), the polynomial
// whose roots are the roots of lambda + lambda_sq * Khat(lambda) away from
// the poles of Khat. Monic by construction for exp-sum and constant kernels
// (den is monic), but normalized anyway.
inline Eigen::VectorXd characteristic_polynomial(const MemoryKernel& kernel, double lambda_sq) {
    if (!(lambda_sq > 0.0))
        throw DomainError("characteristic_polynomial: eigenvalue must be positive");
    const RationalFunction khat = laplace_transform(kernel);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(khat.den.size() + 1);
    p.tail(khat.den.size()) += khat.den;
    p.head(khat.num.size()) += lambda_sq * khat.num;
    return poly_monic(p);
}

inline std::vector<Complex> characteristic_roots(const MemoryKernel& kernel, double lambda_sq) {
    const Eigen::VectorXd p = characteristic_polynomial(kernel, lambda_sq);
    std::vector<Complex> roots = poly_roots(p);
    for (const Complex& r : roots) {
        if (!poly_root_residual_ok(p, r)) {
            std::ostringstream os;
            os << "characteristic_roots: root polish failed at lambda=(" << r.real() << ", "
               << r.imag() << "), residual " << std::abs(poly_eval(p, r));
            throw ConvergenceError(os.str());
        }
    }
    return roots;
}

inline bool hurwitz_check(std::span<const Complex> roots) {
    for (const Complex& r : roots)
        if (!(r.real() < 0.0)) return false;
    return true;
}

struct RootSequenceEntry {
    int n;
    double lambda_sq;
    Complex root;
    double dist;
};

struct RootSequence {
    int m;
    Complex target;
    std::vector<RootSequenceEntry> entries;
};

// Nearest root to `target`, ties broken toward smaller |Im|.
inline Complex select_root(const std::vector<Complex>& roots, Complex target) {
    Complex best = roots.front();
    double best_d = std::abs(best - target);
    for (const Complex& r : roots) {
        const double d = std::abs(r - target);
        if (d < best_d || (d == best_d && std::abs(r.imag()) < std::abs(best.imag()))) {
            best = r;
            best_d = d;
        }
    }
    return best;
}

// Tracks, for each radial index n, the characteristic root nearest to a
// fixed zero of Khat. The kernel must actually have nonzero transform
// zeros, otherwise there is nothing to track.
inline RootSequence root_sequence(const MemoryKernel& kernel, int m, int n_lo, int n_hi,
                                  const DiskGeometry& geom, Complex target, int threads = 1) {
    if (n_lo < 1 || n_hi < n_lo) throw DomainError("root_sequence: bad radial index range");
    const std::vector<Complex> zeros = khat_zeros(kernel);
    if (zeros.empty())
        throw NoTargetError(
            "root_sequence: the kernel transform has no nonzero zeros, so no clustering "
            "target exists");
    bool known = false;
    for (const Complex& z : zeros)
        if (std::abs(z - target) <= 1e-6 * std::max(1.0, std::abs(z))) known = true;
    if (!known) throw DomainError("root_sequence: target is not a zero of the kernel transform");

    // Zero tables are shared state; warm them up before fanning out.
    bessel_zero(m, n_hi);

    RootSequence seq;
    seq.m = m;
    seq.target = target;
    const int count = n_hi - n_lo + 1;
    seq.entries.resize(size_t(count));
    auto work = [&](int lo, int hi) {
        for (int n = lo; n < hi; ++n) {
            const Mode mode = make_mode(m, n_lo + n, geom);
            const std::vector<Complex> roots = characteristic_roots(kernel, mode.lambda_sq);
            const Complex r = select_root(roots, target);
            seq.entries[size_t(n)] = {n_lo + n, mode.lambda_sq, r, std::abs(r - target)};
        }
    };
    const int workers = std::clamp(threads, 1, count);
    if (workers == 1) {
        work(0, count);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
        pool.reserve(size_t(workers));
        for (int w = 0; w < workers; ++w) {
            const int lo = count * w / workers;
            const int hi = count * (w + 1) / workers;
            pool.emplace_back([&, lo, hi, w] {
                try {
                    work(lo, hi);
                } catch (...) {
                    errors[size_t(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return seq;
}

}  // namespace gp
