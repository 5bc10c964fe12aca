#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lobexec/block_solver.hpp"
#include "lobexec/cost_engine.hpp"
#include "lobexec/h_function.hpp"

namespace lobexec {

struct GeneralSolution {
    Model model = Model::V;
    double nu = 0.0;     // Lagrange multiplier; same sign as -target
    double cost = 0.0;
    bool case_two = false;  // continuous P solved under condition (ii)
    std::vector<std::string> warnings;
    std::variant<DiscreteStrategy, ContinuousStrategy> strategy;
    std::vector<double> zeta;  // optimal impact path (continuous solutions)
};

// Optimal execution on a fixed grid for a general shape. Assumption failures
// (the paper's sufficient conditions) downgrade to warnings; the scalar
// multiplier equation is solved by monotone bracketing.
GeneralSolution solve_general_discrete(double target, const TimeGrid& grid,
                                       const MarketParams& params, const Shape& shape,
                                       Model model);

GeneralSolution solve_general_continuous(double target, const MarketParams& params,
                                         const Shape& shape, Model model, int n_samples = 2001);

struct ClauseReport {
    bool holds = true;
    std::optional<double> witness_t;
};

struct PowerlawConditionReport {
    ClauseReport pms;
    ClauseReport ttpm_level;       // rho+eta >= 0 (V) / rho(1+g)-eta >= 0 (P)
    ClauseReport ttpm_derivative;  // the derivative clause
};

PowerlawConditionReport powerlaw_conditions(const MarketParams& params, double gamma, Model model,
                                            int grid_density = 10000);

enum class AssumptionId { a2_1, a2_2, thm_2_6, thm_2_9 };

struct AssumptionReport {
    AssumptionId which = AssumptionId::a2_1;
    bool pass = true;
    std::optional<double> witness_x;
    std::optional<double> witness_t;
    int case_id = 0;  // thm_2_9: 1 or 2 when pass
    std::string detail;
};

// Sampled verification of the paper's sufficient conditions; reports only.
AssumptionReport assumption_check(const Shape& shape, const MarketParams& params,
                                  AssumptionId which, int t_samples = 201, int x_samples = 201,
                                  double x_range = 4.0);

}  // namespace lobexec
