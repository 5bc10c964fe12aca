#include "lobexec/time_function.hpp"

#include <algorithm>
#include <cmath>

#include "lobexec/errors.hpp"

namespace lobexec {

namespace {

double pl_value(const TimeFunction::PiecewiseLinear& pl, double t) {
    if (t <= pl.t.front()) return pl.v.front();
    if (t >= pl.t.back()) return pl.v.back();
    const auto it = std::upper_bound(pl.t.begin(), pl.t.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - pl.t.begin());
    const double w = (t - pl.t[k - 1]) / (pl.t[k] - pl.t[k - 1]);
    return pl.v[k - 1] + w * (pl.v[k] - pl.v[k - 1]);
}

// Exact integral of the clamped piecewise-linear interpolant.
double pl_integral(const TimeFunction::PiecewiseLinear& pl, double t0, double t1) {
    auto segment = [&](double a, double b) {
        return 0.5 * (pl_value(pl, a) + pl_value(pl, b)) * (b - a);
    };
    double acc = 0.0;
    double a = t0;
    if (a < pl.t.front()) {
        const double b = std::min(t1, pl.t.front());
        acc += pl.v.front() * (b - a);
        a = b;
    }
    for (std::size_t k = 1; k < pl.t.size() && a < t1; ++k) {
        if (pl.t[k] <= a) continue;
        const double b = std::min(t1, pl.t[k]);
        acc += segment(a, b);
        a = b;
    }
    if (a < t1) acc += pl.v.back() * (t1 - a);
    return acc;
}

}  // namespace

TimeFunction TimeFunction::constant(double value) { return TimeFunction(Constant{value}); }

TimeFunction TimeFunction::sinusoid(double base, double amplitude, double omega) {
    return TimeFunction(Sinusoid{base, amplitude, omega});
}

TimeFunction TimeFunction::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw ConfigError("piecewise_linear needs at least two knots");
    PiecewiseLinear pl;
    pl.t.reserve(knots.size());
    pl.v.reserve(knots.size());
    for (const auto& [t, v] : knots) {
        if (!pl.t.empty() && t <= pl.t.back()) {
            throw ConfigError("piecewise_linear knots must be strictly increasing in t");
        }
        pl.t.push_back(t);
        pl.v.push_back(v);
    }
    return TimeFunction(std::move(pl));
}

double TimeFunction::value(double t) const {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                return n.base + n.amplitude * std::cos(n.omega * t);
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                return pl_value(n, t);
            } else {
                return n.inner->value(n.horizon - t);
            }
        },
        node_);
}

double TimeFunction::derivative(double t, double h) const {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                return -n.amplitude * n.omega * std::sin(n.omega * t);
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                // One-sided at the knot-range boundary (the clamped tails are
                // flat and would otherwise halve the slope).
                if (t - h < n.t.front()) return (pl_value(n, t + h) - pl_value(n, t)) / h;
                if (t + h > n.t.back()) return (pl_value(n, t) - pl_value(n, t - h)) / h;
                return (pl_value(n, t + h) - pl_value(n, t - h)) / (2.0 * h);
            } else {
                return -n.inner->derivative(n.horizon - t, h);
            }
        },
        node_);
}

double TimeFunction::second_derivative(double t, double h) const {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                return -n.amplitude * n.omega * n.omega * std::cos(n.omega * t);
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                return (pl_value(n, t + h) - 2.0 * pl_value(n, t) + pl_value(n, t - h)) / (h * h);
            } else {
                return n.inner->second_derivative(n.horizon - t, h);
            }
        },
        node_);
}

bool TimeFunction::analytic_derivatives() const {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant> || std::is_same_v<T, Sinusoid>) {
                return true;
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                return false;
            } else {
                return n.inner->analytic_derivatives();
            }
        },
        node_);
}

double TimeFunction::integral(double t0, double t1) const {
    if (t0 == t1) return 0.0;
    if (t1 < t0) return -integral(t1, t0);
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return n.value * (t1 - t0);
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                if (n.omega == 0.0) return (n.base + n.amplitude) * (t1 - t0);
                return n.base * (t1 - t0) +
                       n.amplitude / n.omega * (std::sin(n.omega * t1) - std::sin(n.omega * t0));
            } else if constexpr (std::is_same_v<T, PiecewiseLinear>) {
                return pl_integral(n, t0, t1);
            } else {
                return n.inner->integral(n.horizon - t1, n.horizon - t0);
            }
        },
        node_);
}

TimeFunction TimeFunction::reversed(double horizon) const {
    if (const auto* c = std::get_if<Constant>(&node_)) return constant(c->value);
    if (const auto* r = std::get_if<Reflected>(&node_)) {
        if (r->horizon == horizon) return *r->inner;  // double reflection cancels
    }
    return TimeFunction(Reflected{std::make_shared<TimeFunction>(*this), horizon});
}

}  // namespace lobexec
