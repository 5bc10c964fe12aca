#pragma once

#include <vector>

#include "lobexec/time_function.hpp"

namespace lobexec {

// Time-varying book depth lambda(t) and resilience rho(t) on [0, horizon].
// eta(t) = lambda'(t)/lambda(t) is the relative growth rate of the depth.
struct MarketParams {
    TimeFunction lambda;
    TimeFunction rho;
    double horizon;

    // Positivity of lambda and rho on a sample grid. Throws NonPositiveDepth /
    // ConditionViolated. The paper assumes positivity; configs can violate it.
    void validate(int n_samples = 1000) const;

    double lambda_at(double t) const { return lambda.value(t); }
    double rho_at(double t) const { return rho.value(t); }
    double eta(double t) const;
    // d/dt eta = lambda''/lambda - eta^2 when analytic, else central difference.
    double eta_prime(double t) const;
    bool analytic() const { return lambda.analytic_derivatives() && rho.analytic_derivatives(); }

    // Parameters of the time-reversed problem: lambda(T-t), rho(T-t).
    MarketParams reversed() const;
};

double eval_eta(const MarketParams& params, double t);

struct TimeGrid {
    std::vector<double> times;

    static TimeGrid regular(int n_intervals, double horizon);
    // t_0 = 0, strictly increasing, t_N = horizon.
    void validate(double horizon) const;
    int intervals() const { return static_cast<int>(times.size()) - 1; }
};

// Per-interval exponentials, 1-based interval i stored at index i-1:
//   rho_integral[i] = integral of rho over [t_{i-1}, t_i]
//   a[i]       = exp(-rho_integral[i])
//   a_tilde[i] = a[i] * lambda(t_{i-1}) / lambda(t_i)
//   a_hat[i]   = a[i] * lambda(t_i) / lambda(t_{i-1})
struct GridCoefficients {
    std::vector<double> a;
    std::vector<double> a_tilde;
    std::vector<double> a_hat;
    std::vector<double> rho_integral;
};

GridCoefficients grid_coefficients(const MarketParams& params, const TimeGrid& grid);

}  // namespace lobexec
