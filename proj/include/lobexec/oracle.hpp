#pragma once

#include <vector>

#include "lobexec/cost_engine.hpp"

namespace lobexec {

// Brute-force minimizers validating the closed forms at desk scale. They
// deliberately share nothing with the solvers beyond the cost engine.
struct OracleResult {
    std::vector<double> trades;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
    double kkt_residual = 0.0;  // max deviation of gradient entries from their mean
    bool negative_curvature = false;
};

// Full impact matrix of the block-shaped quadratic form (M^V or M^P).
std::vector<std::vector<double>> impact_matrix(const TimeGrid& grid, const MarketParams& params,
                                               Model model);

// Solves the KKT system [M 1; 1' 0][xi; mu] = [0; -target] by Gaussian
// elimination with partial pivoting. Reports negative curvature (smallest
// eigenvalue of M via power iteration) instead of claiming optimality when
// the form is not positive definite.
OracleResult oracle_block(double target, const TimeGrid& grid, const MarketParams& params,
                          Model model);

// Projected gradient descent on the hyperplane sum(xi) = -target, analytic
// gradients from the backward recursions, Armijo line search. Returns the
// best iterate with converged=false when max_iter is exhausted.
OracleResult oracle_general(double target, const TimeGrid& grid, const MarketParams& params,
                            const Shape& shape, Model model, int max_iter = 200000);

// Central differences of discrete_cost; h <= 0 selects 1e-6*(1+max|xi|).
std::vector<double> finite_diff_gradient(const DiscreteStrategy& strategy, Model model,
                                         const MarketParams& params, const Shape& shape,
                                         double h = 0.0);

// Gradient of the deterministic cost from the backward recursions.
std::vector<double> analytic_gradient(const DiscreteStrategy& strategy, Model model,
                                      const MarketParams& params, const Shape& shape);

}  // namespace lobexec
