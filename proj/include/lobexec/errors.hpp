#pragma once

#include <stdexcept>
#include <string>

namespace lobexec {

// Invalid user input (bad descriptor, malformed grid, unknown enum value).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical precondition of a solver or formula does not hold.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure failed to reach its stated accuracy.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class NonPositiveDepth : public PreconditionError {
public:
    explicit NonPositiveDepth(double t, double value)
        : PreconditionError("depth is not positive at t=" + std::to_string(t) +
                            " (value " + std::to_string(value) + ")"),
          t(t), value(value) {}
    double t;
    double value;
};

class NotPositiveDefinite : public PreconditionError {
public:
    explicit NotPositiveDefinite(int witness_index)
        : PreconditionError("cost quadratic form is not positive definite (interval " +
                            std::to_string(witness_index) + ")"),
          witness_index(witness_index) {}
    int witness_index;
};

class DegenerateDenominator : public PreconditionError {
public:
    explicit DegenerateDenominator(const std::string& what_vanishes, double where)
        : PreconditionError(what_vanishes + " vanishes or has the wrong sign at " +
                            std::to_string(where)),
          where(where) {}
    double where;
};

class NonMonotone : public PreconditionError {
public:
    NonMonotone(double x1, double x2)
        : PreconditionError("function is not monotone between sample points " +
                            std::to_string(x1) + " and " + std::to_string(x2)),
          x1(x1), x2(x2) {}
    double x1;
    double x2;
};

class ConditionViolated : public PreconditionError {
public:
    explicit ConditionViolated(const std::string& msg) : PreconditionError(msg) {}
};

class QuadratureFailure : public NumericalError {
public:
    explicit QuadratureFailure(const std::string& msg) : NumericalError(msg) {}
};

class RootBracketFailure : public NumericalError {
public:
    explicit RootBracketFailure(const std::string& msg) : NumericalError(msg) {}
};

class SingularSystem : public NumericalError {
public:
    explicit SingularSystem(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace lobexec
