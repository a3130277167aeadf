#pragma once

#include <stdexcept>
#include <string>

namespace ladderkit {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition violations: bad arguments, missing brackets, excluded model
/// classes, tilt parameters outside their domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// A transform was evaluated at (or numerically indistinguishable from) a pole.
class PoleError : public Error {
public:
    explicit PoleError(const std::string& what) : Error(what) {}
};

/// A linear system that the theory promises solvable turned out singular
/// (spectral overlap in Kronecker solves, singular resolvents).
class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& what) : Error(what) {}
};

/// Result magnitude beyond double range (matrix exponential blow-up).
class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error(what) {}
};

/// An iteration exhausted its budget without meeting its tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what, double lastStep)
        : Error(what), lastStep(lastStep) {}
    double lastStep;
};

/// An internal invariant failed (monotonicity of iterates, residual gates,
/// construction-time identity checks). Indicates a bug, not bad input.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error(what) {}
};

} // namespace ladderkit
