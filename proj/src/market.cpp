#include "lobexec/market.hpp"

#include <cmath>
#include <string>

#include "lobexec/errors.hpp"
#include "lobexec/numerics.hpp"

namespace lobexec {

void MarketParams::validate(int n_samples) const {
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
    for (int k = 0; k <= n_samples; ++k) {
        const double t = horizon * k / n_samples;
        const double l = lambda.value(t);
        if (!(l > 0.0) || !std::isfinite(l)) throw NonPositiveDepth(t, l);
        const double r = rho.value(t);
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw ConditionViolated("resilience is not positive at t=" + std::to_string(t) +
                                    " (value " + std::to_string(r) + ")");
        }
    }
}

double MarketParams::eta(double t) const {
    const double l = lambda.value(t);
    if (!(l > 0.0)) throw NonPositiveDepth(t, l);
    const double h = std::max(1e-6, 1e-8 * horizon);
    return lambda.derivative(t, h) / l;
}

double MarketParams::eta_prime(double t) const {
    if (lambda.analytic_derivatives()) {
        const double l = lambda.value(t);
        if (!(l > 0.0)) throw NonPositiveDepth(t, l);
        const double e = lambda.derivative(t) / l;
        return lambda.second_derivative(t) / l - e * e;
    }
    const double h = std::max(1e-5, 1e-7 * horizon);
    return central_difference([&](double s) { return eta(s); }, t, h);
}

MarketParams MarketParams::reversed() const {
    return MarketParams{lambda.reversed(horizon), rho.reversed(horizon), horizon};
}

double eval_eta(const MarketParams& params, double t) { return params.eta(t); }

TimeGrid TimeGrid::regular(int n_intervals, double horizon) {
    if (n_intervals < 1) throw ConfigError("grid needs at least one interval");
    TimeGrid g;
    g.times.resize(n_intervals + 1);
    for (int i = 0; i <= n_intervals; ++i) g.times[i] = horizon * i / n_intervals;
    g.times.back() = horizon;
    return g;
}

void TimeGrid::validate(double horizon) const {
    if (times.size() < 2) throw ConfigError("grid needs at least two times");
    if (times.front() != 0.0) throw ConfigError("grid must start at t=0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ConfigError("grid times must be strictly increasing");
    }
    if (std::abs(times.back() - horizon) > 1e-12 * (1.0 + horizon)) {
        throw ConfigError("grid must end at the horizon");
    }
}

GridCoefficients grid_coefficients(const MarketParams& params, const TimeGrid& grid) {
    const int n = grid.intervals();
    GridCoefficients c;
    c.a.resize(n);
    c.a_tilde.resize(n);
    c.a_hat.resize(n);
    c.rho_integral.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t0 = grid.times[i];
        const double t1 = grid.times[i + 1];
        c.rho_integral[i] = params.rho.integral(t0, t1);
        c.a[i] = std::exp(-c.rho_integral[i]);
        const double l0 = params.lambda.value(t0);
        const double l1 = params.lambda.value(t1);
        if (!(l0 > 0.0)) throw NonPositiveDepth(t0, l0);
        if (!(l1 > 0.0)) throw NonPositiveDepth(t1, l1);
        c.a_tilde[i] = c.a[i] * l0 / l1;
        c.a_hat[i] = c.a[i] * l1 / l0;
    }
    return c;
}

}  // namespace lobexec
