#include "lobexec/cost_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lobexec/errors.hpp"
#include "lobexec/numerics.hpp"

namespace lobexec {

void DiscreteStrategy::validate(double horizon) const {
    grid.validate(horizon);
    if (trades.size() != grid.times.size()) {
        throw ConfigError("strategy needs one trade per grid time");
    }
    if (std::abs(net_shares() + target) > 1e-9 * (1.0 + std::abs(target))) {
        throw ConfigError("trades must sum to -target");
    }
}

double DiscreteStrategy::net_shares() const {
    double s = 0.0;
    for (double xi : trades) s += xi;
    return s;
}

double ContinuousStrategy::impulse_at(double t) const {
    double s = 0.0;
    for (const auto& imp : impulses) {
        if (imp.t == t) s += imp.size;
    }
    return s;
}

double ContinuousStrategy::net_shares() const {
    double s = 0.0;
    for (const auto& imp : impulses) s += imp.size;
    return s + trapezoid(sample_t, density);
}

void ContinuousStrategy::validate(double horizon) const {
    if (sample_t.size() != density.size()) throw ConfigError("density/sample size mismatch");
    for (std::size_t i = 1; i < sample_t.size(); ++i) {
        if (!(sample_t[i] > sample_t[i - 1])) {
            throw ConfigError("density samples must be strictly increasing in t");
        }
    }
    for (const auto& imp : impulses) {
        if (imp.t < 0.0 || imp.t > horizon) throw ConfigError("impulse outside [0, horizon]");
    }
    if (std::abs(net_shares() + target) > 1e-6 * (1.0 + std::abs(target))) {
        throw ConfigError("impulses + density must sum to -target");
    }
}

ImpactState propagate(ImpactState state, double t1, Model model, const MarketParams& params,
                      const Shape& shape) {
    if (t1 < state.t) throw ConfigError("cannot propagate backwards in time");
    if (t1 == state.t) return state;
    const double decay = std::exp(-params.rho.integral(state.t, t1));
    ImpactState out;
    out.t = t1;
    if (model == Model::V) {
        out.volume_impact = state.volume_impact * decay;
        out.price_impact = shape.F_inv(out.volume_impact / params.lambda_at(t1));
    } else {
        out.price_impact = state.price_impact * decay;
        out.volume_impact = params.lambda_at(t1) * shape.F(out.price_impact);
    }
    return out;
}

std::pair<ImpactState, double> apply_trade(ImpactState state, double size,
                                           const MarketParams& params, const Shape& shape) {
    const double lam = params.lambda_at(state.t);
    const double before = state.volume_impact / lam;
    const double after = before + size / lam;
    const double cash = lam * (shape.G(after) - shape.G(before));
    ImpactState out;
    out.t = state.t;
    out.volume_impact = state.volume_impact + size;
    out.price_impact = shape.F_inv(after);
    return {out, cash};
}

namespace {

CostReport run_events(const std::vector<TradeRecord>& events, Model model,
                      const MarketParams& params, const Shape& shape, double target,
                      std::optional<double> s0) {
    CostReport report;
    report.model = model;
    report.per_trade.reserve(events.size());
    ImpactState state;
    state.t = events.empty() ? 0.0 : events.front().t;
    for (const auto& ev : events) {
        state = propagate(state, ev.t, model, params, shape);
        auto [next, cash] = apply_trade(state, ev.size, params, shape);
        state = next;
        report.per_trade.push_back({ev.t, ev.size, cash});
        report.cost += cash;
    }
    if (s0) report.full_cost = -(*s0) * target + report.cost;
    return report;
}

}  // namespace

CostReport discrete_cost(const DiscreteStrategy& strategy, Model model,
                         const MarketParams& params, const Shape& shape,
                         std::optional<double> s0) {
    std::vector<TradeRecord> events;
    events.reserve(strategy.trades.size());
    for (std::size_t i = 0; i < strategy.trades.size(); ++i) {
        events.push_back({strategy.grid.times[i], strategy.trades[i], 0.0});
    }
    return run_events(events, model, params, shape, strategy.target, s0);
}

CostReport continuous_cost(const ContinuousStrategy& strategy, Model model,
                           const MarketParams& params, const Shape& shape, int n_steps,
                           std::optional<double> s0) {
    if (n_steps < 100) throw ConfigError("continuous cost needs n_steps >= 100");
    std::vector<TradeRecord> events;
    for (const auto& imp : strategy.impulses) events.push_back({imp.t, imp.size, 0.0});
    if (!strategy.sample_t.empty()) {
        const double t0 = strategy.sample_t.front();
        const double t1 = strategy.sample_t.back();
        const double dt = (t1 - t0) / n_steps;
        for (int j = 0; j < n_steps; ++j) {
            const double lo = t0 + j * dt;
            const double hi = (j + 1 == n_steps) ? t1 : t0 + (j + 1) * dt;
            const double mass =
                piecewise_linear_mass(strategy.sample_t, strategy.density, lo, hi);
            if (mass != 0.0) events.push_back({0.5 * (lo + hi), mass, 0.0});
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const TradeRecord& a, const TradeRecord& b) { return a.t < b.t; });
    return run_events(events, model, params, shape, strategy.target, s0);
}

}  // namespace lobexec
