#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lobexec/lob_shape.hpp"
#include "lobexec/market.hpp"

namespace lobexec {

// V: volume impact E reverts exponentially.  P: price impact D reverts.
enum class Model { V, P };

// Trades on a fixed grid; positive = buy, negative = sell.
// Liquidating a position of `target` shares means sum(trades) = -target.
struct DiscreteStrategy {
    TimeGrid grid;
    std::vector<double> trades;
    double target = 0.0;

    void validate(double horizon) const;
    double net_shares() const;
};

struct Impulse {
    double t;
    double size;
};

// Impulse(s) + absolutely continuous density sampled on [0, horizon].
// Density between samples is linear; the usual solver output carries exactly
// two impulses, at 0 and at the horizon.
struct ContinuousStrategy {
    std::vector<double> sample_t;
    std::vector<double> density;
    std::vector<Impulse> impulses;
    double target = 0.0;

    double impulse_at(double t) const;
    double xi0() const { return impulse_at(sample_t.empty() ? 0.0 : sample_t.front()); }
    double xiT() const { return impulse_at(sample_t.empty() ? 0.0 : sample_t.back()); }
    double net_shares() const;
    void validate(double horizon) const;
};

// E = lambda(t) * F(D) at all times.
struct ImpactState {
    double volume_impact = 0.0;  // E
    double price_impact = 0.0;   // D
    double t = 0.0;
};

struct TradeRecord {
    double t;
    double size;
    double cash;
};

struct CostReport {
    Model model = Model::V;
    double cost = 0.0;                   // deterministic part, S0 excluded
    std::optional<double> full_cost;     // -s0*target + cost when s0 given
    std::vector<TradeRecord> per_trade;  // sums to cost
};

// Decay the impact state from state.t to t1 with no trading.
ImpactState propagate(ImpactState state, double t1, Model model, const MarketParams& params,
                      const Shape& shape);

// Execute a trade at the state's time; returns the new state and the cash
// paid, lambda(t)*[G((E+xi)/lambda) - G(E/lambda)].
std::pair<ImpactState, double> apply_trade(ImpactState state, double size,
                                           const MarketParams& params, const Shape& shape);

CostReport discrete_cost(const DiscreteStrategy& strategy, Model model,
                         const MarketParams& params, const Shape& shape,
                         std::optional<double> s0 = std::nullopt);

// Impulse terms are exact; the density contributes through n_steps chunks,
// each applied as a small trade at the chunk midpoint (O(1/n_steps) error).
CostReport continuous_cost(const ContinuousStrategy& strategy, Model model,
                           const MarketParams& params, const Shape& shape, int n_steps = 10000,
                           std::optional<double> s0 = std::nullopt);

}  // namespace lobexec
