#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "lobexec/cost_engine.hpp"

namespace lobexec {

struct PmsWitness {
    double t1 = 0.0;
    double t2 = 0.0;
    double size = 0.0;  // buy size at t1, sold back at t2
    double cost = 0.0;  // negative when the witness certifies a PMS
};

struct ManipulationReport {
    bool pms_found = false;
    std::optional<PmsWitness> witness;
    bool ttpm_found = false;
    int positive_trades = 0;
    int negative_trades = 0;
};

struct PmsSearchOptions {
    int t1_count = 200;
    std::vector<double> gap_fractions{1e-3, 1e-2, 1e-1};  // (t2-t1)/horizon
    std::vector<double> size_factors{0.01, 0.1, 1.0};
    double scale = 1.0;
    bool refine = true;          // golden-section sharpening of a found witness
    double threshold = -1e-9;    // applied as threshold * scale^2
};

// Lattice scan over round trips (buy at t1, sell at t2): returns the most
// negative cost found, if any. The paper's counterexamples are local in
// t2 - t1, which the shrinking gap set covers.
ManipulationReport search_pms(const MarketParams& params, const Shape& shape, Model model,
                              const PmsSearchOptions& opts = {});

// TTPM is certified when the optimal strategy for a nonzero target carries a
// trade of the opposite direction.
ManipulationReport classify_ttpm(
    const std::variant<DiscreteStrategy, ContinuousStrategy>& strategy, double target);

// Cost of the round trip (buy size at t1, sell size at t2) evaluated through
// the cost engine on the padded grid (0, t1, t2[, horizon]).
double round_trip_cost(const MarketParams& params, const Shape& shape, Model model, double t1,
                       double t2, double size);

}  // namespace lobexec
