#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gp {

using Complex = std::complex<double>;

// Failure classes, mirrored in the CLI exit codes: bad inputs and broken
// preconditions are `validation`, runtime breakdowns (non-convergence,
// degenerate spectra) are `numerical`.
enum class Fault { validation, numerical };

class Error : public std::runtime_error {
public:
    Error(Fault f, const std::string& msg) : std::runtime_error(msg), fault_(f) {}
    Fault fault() const noexcept { return fault_; }

private:
    Fault fault_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(Fault::validation, msg) {}
};

struct RangeError : Error {
    explicit RangeError(const std::string& msg) : Error(Fault::validation, msg) {}
};

// Operation asked of a kernel variant that does not support it.
struct UnsupportedVariantError : Error {
    explicit UnsupportedVariantError(const std::string& msg) : Error(Fault::validation, msg) {}
};

struct PoleError : Error {
    PoleError(const std::string& msg, Complex pole)
        : Error(Fault::validation, msg), pole_(pole) {}
    Complex pole() const noexcept { return pole_; }

private:
    Complex pole_;
};

// Projection grid too coarse for a requested mode; message names the mode.
struct ResolutionError : Error {
    explicit ResolutionError(const std::string& msg) : Error(Fault::validation, msg) {}
};

// Clustered-root scenario requested for a kernel whose transform has no
// nonzero zeros, so there is no target to track.
struct NoTargetError : Error {
    explicit NoTargetError(const std::string& msg) : Error(Fault::validation, msg) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg) : Error(Fault::numerical, msg) {}
};

// Characteristic roots too close for the partial-fraction solution formula.
struct DegenerateSpectrumError : Error {
    explicit DegenerateSpectrumError(const std::string& msg) : Error(Fault::numerical, msg) {}
};

}  // namespace gp
