#pragma once

#include <memory>
#include <utility>
#include <variant>
#include <vector>

namespace lobexec {

// Closed descriptor for a scalar function of time. Keeping the descriptor
// (instead of an opaque callable) lets derivatives and integrals be exact for
// the constant and sinusoidal kinds; piecewise-linear functions integrate
// exactly segment by segment and differentiate by central difference.
class TimeFunction {
public:
    struct Constant {
        double value;
    };
    // base + amplitude * cos(omega * t)
    struct Sinusoid {
        double base;
        double amplitude;
        double omega;
    };
    // Sorted knots, linear between them, clamped outside the knot range.
    struct PiecewiseLinear {
        std::vector<double> t;
        std::vector<double> v;
    };
    // t -> inner(horizon - t); used by time reversal.
    struct Reflected {
        std::shared_ptr<const TimeFunction> inner;
        double horizon;
    };

    static TimeFunction constant(double value);
    static TimeFunction sinusoid(double base, double amplitude, double omega);
    static TimeFunction piecewise_linear(std::vector<std::pair<double, double>> knots);

    double value(double t) const;
    double operator()(double t) const { return value(t); }

    // Analytic for constant/sinusoid; central difference (step h) otherwise.
    double derivative(double t, double h = 1e-6) const;
    double second_derivative(double t, double h = 1e-4) const;
    bool analytic_derivatives() const;

    // Exact antiderivative difference for every kind.
    double integral(double t0, double t1) const;

    TimeFunction reversed(double horizon) const;

    const std::variant<Constant, Sinusoid, PiecewiseLinear, Reflected>& node() const {
        return node_;
    }

private:
    explicit TimeFunction(std::variant<Constant, Sinusoid, PiecewiseLinear, Reflected> node)
        : node_(std::move(node)) {}
    std::variant<Constant, Sinusoid, PiecewiseLinear, Reflected> node_;
};

}  // namespace lobexec
