#pragma once

#include <optional>
#include <utility>
#include <variant>

#include "lobexec/cost_engine.hpp"

namespace lobexec {

struct PdReport {
    bool positive_definite = true;
    int witness_index = 0;  // 1-based interval of the first violation, 0 if none
};

// V: a_i * a_tilde_i < 1 for all i.  P: a_i * a_hat_i < 1 for all i.
PdReport pd_check_block(const GridCoefficients& coeffs, Model model);

struct BlockSolution {
    Model model = Model::V;
    double K = 0.0;     // optimal cost is target^2 / (2K)
    double cost = 0.0;
    std::variant<DiscreteStrategy, ContinuousStrategy> strategy;
};

// Closed-form optimal execution for the block-shaped book on a fixed grid.
// Throws NotPositiveDefinite when the PD condition fails.
BlockSolution solve_block_discrete(double target, const TimeGrid& grid,
                                   const MarketParams& params, Model model);

// Continuous-time closed form. Requires 2*rho + eta > 0 (V) respectively
// 2*rho - eta > 0 (P) on [0, horizon]; throws DegenerateDenominator otherwise.
BlockSolution solve_block_continuous(double target, const MarketParams& params, Model model,
                                     int n_samples = 2001);

struct ConditionReport {
    bool holds = true;
    int failing_clause = 0;  // 1 = level clause, 2 = derivative clause
    std::optional<double> witness_t;
};

// No price manipulation iff 2*rho + eta >= 0 (V) / 2*rho - eta >= 0 (P),
// checked on a dense time grid.
ConditionReport pms_condition_block(const MarketParams& params, Model model,
                                    int grid_density = 10000);

// No transaction-triggered manipulation iff rho + eta >= 0 and the derivative
// clause holds (V); rho - eta >= 0 and its derivative clause (P).
ConditionReport ttpm_condition_block(const MarketParams& params, Model model,
                                     int grid_density = 10000);

struct SignConditionReport {
    bool holds = true;
    int witness_index = 0;
};

// Grid-level sufficient condition for all optimal trades to share one sign.
SignConditionReport discrete_sign_condition_block(const GridCoefficients& coeffs, Model model);

// rho(T-t), lambda(T-t) and the reflected grid; model P on the original
// problem equals model V on the dual one.
std::pair<TimeGrid, MarketParams> time_reversal_dual(const TimeGrid& grid,
                                                     const MarketParams& params);

// The bracket multiplying -target/K * lambda(t) in the continuous density;
// identical to the TTPM derivative clause. Exposed for the figure outputs.
double block_density_clause(const MarketParams& params, Model model, double t);

}  // namespace lobexec
