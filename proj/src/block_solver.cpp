#include "lobexec/block_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lobexec/errors.hpp"
#include "lobexec/numerics.hpp"

namespace lobexec {

namespace {

// Clause tolerance: equality counts as holding.
constexpr double kClauseTol = 1e-12;

double ratio_v(const MarketParams& p, double t) {
    const double r = p.rho_at(t);
    const double d = 2.0 * r + p.eta(t);
    if (d == 0.0) throw DegenerateDenominator("2*rho + eta", t);
    return r / d;
}

double ratio_p(const MarketParams& p, double t) {
    const double r = p.rho_at(t);
    const double e = p.eta(t);
    const double d = 2.0 * r - e;
    if (d == 0.0) throw DegenerateDenominator("2*rho - eta", t);
    return (r - e) / d;
}

double ratio_derivative(const MarketParams& p, Model model, double t) {
    if (p.analytic()) {
        const double r = p.rho_at(t);
        const double e = p.eta(t);
        const double rp = p.rho.derivative(t);
        const double ep = p.eta_prime(t);
        if (model == Model::V) {
            const double d = 2.0 * r + e;
            return (rp * e - r * ep) / (d * d);
        }
        const double d = 2.0 * r - e;
        return ((rp - ep) * d - (r - e) * (2.0 * rp - ep)) / (d * d);
    }
    const double h = std::max(1e-6, 1e-8 * p.horizon);
    auto f = [&](double s) { return model == Model::V ? ratio_v(p, s) : ratio_p(p, s); };
    const double lo = std::max(0.0, t - h);
    const double hi = std::min(p.horizon, t + h);
    return (f(hi) - f(lo)) / (hi - lo);
}

}  // namespace

double block_density_clause(const MarketParams& params, Model model, double t) {
    const double r = params.rho_at(t);
    const double e = params.eta(t);
    if (model == Model::V) {
        const double d = 2.0 * r + e;
        if (d == 0.0) throw DegenerateDenominator("2*rho + eta", t);
        return ratio_derivative(params, model, t) + r * (r + e) / d;
    }
    const double d = 2.0 * r - e;
    if (d == 0.0) throw DegenerateDenominator("2*rho - eta", t);
    return ratio_derivative(params, model, t) + r * (r - e) / d;
}

PdReport pd_check_block(const GridCoefficients& coeffs, Model model) {
    const auto& other = model == Model::V ? coeffs.a_tilde : coeffs.a_hat;
    for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
        if (!(coeffs.a[i] * other[i] < 1.0)) {
            return {false, static_cast<int>(i) + 1};
        }
    }
    return {true, 0};
}

BlockSolution solve_block_discrete(double target, const TimeGrid& grid,
                                   const MarketParams& params, Model model) {
    grid.validate(params.horizon);
    const auto coeffs = grid_coefficients(params, grid);
    const auto pd = pd_check_block(coeffs, model);
    if (!pd.positive_definite) throw NotPositiveDefinite(pd.witness_index);

    const int n = grid.intervals();
    const auto& t = grid.times;
    auto lam = [&](int i) { return params.lambda_at(t[i]); };
    const auto& a = coeffs.a;
    std::vector<double> xi(n + 1, 0.0);
    double K = 0.0;
    if (model == Model::V) {
        const auto& b = coeffs.a_tilde;
        K = (lam(0) * (1.0 - 2.0 * a[0]) + lam(1)) / (1.0 - a[0] * b[0]);
        for (int i = 2; i <= n; ++i) {
            const double q = 1.0 - b[i - 1];
            K += lam(i) * q * q / (1.0 - a[i - 1] * b[i - 1]);
        }
        const double scale = -target / K;
        xi[0] = scale * lam(0) * (1.0 - a[0]) / (1.0 - a[0] * b[0]);
        for (int i = 1; i <= n - 1; ++i) {
            xi[i] = scale * lam(i) *
                    (a[i] / (1.0 - a[i] * b[i]) * (b[i] - 1.0) +
                     (1.0 - b[i - 1]) / (1.0 - a[i - 1] * b[i - 1]));
        }
        xi[n] = scale * lam(n) * (1.0 - b[n - 1]) / (1.0 - a[n - 1] * b[n - 1]);
    } else {
        const auto& b = coeffs.a_hat;
        K = (lam(n) * (1.0 - 2.0 * a[n - 1]) + lam(n - 1)) / (1.0 - a[n - 1] * b[n - 1]);
        for (int i = 0; i <= n - 2; ++i) {
            const double q = 1.0 - b[i];
            K += lam(i) * q * q / (1.0 - a[i] * b[i]);
        }
        const double scale = -target / K;
        xi[0] = scale * lam(0) * (1.0 - b[0]) / (1.0 - a[0] * b[0]);
        for (int i = 1; i <= n - 1; ++i) {
            xi[i] = scale * lam(i) *
                    (a[i - 1] / (1.0 - a[i - 1] * b[i - 1]) * (b[i - 1] - 1.0) +
                     (1.0 - b[i]) / (1.0 - a[i] * b[i]));
        }
        xi[n] = scale * lam(n) * (1.0 - a[n - 1]) / (1.0 - a[n - 1] * b[n - 1]);
    }

    DiscreteStrategy strat{grid, std::move(xi), target};
    if (std::abs(strat.net_shares() + target) > 1e-9 * (1.0 + std::abs(target))) {
        throw NumericalError("closed-form trades do not sum to -target");
    }
    BlockSolution sol;
    sol.model = model;
    sol.K = K;
    sol.cost = target * target / (2.0 * K);
    sol.strategy = std::move(strat);
    return sol;
}

BlockSolution solve_block_continuous(double target, const MarketParams& params, Model model,
                                     int n_samples) {
    if (n_samples < 2) throw ConfigError("need at least two density samples");
    const double T = params.horizon;
    const double sgn_check = model == Model::V ? 1.0 : -1.0;
    // Denominator must keep one sign; sample densely before integrating.
    for (int k = 0; k <= 1000; ++k) {
        const double t = T * k / 1000.0;
        const double d = 2.0 * params.rho_at(t) + sgn_check * params.eta(t);
        if (!(d > 0.0)) {
            throw DegenerateDenominator(model == Model::V ? "2*rho + eta" : "2*rho - eta", t);
        }
    }
    double K;
    if (model == Model::V) {
        K = params.lambda_at(T) + integrate(
                                      [&](double s) {
                                          const double r = params.rho_at(s);
                                          return r * r * params.lambda_at(s) /
                                                 (2.0 * r + params.eta(s));
                                      },
                                      0.0, T);
    } else {
        K = params.lambda_at(0.0) + integrate(
                                        [&](double s) {
                                            const double r = params.rho_at(s);
                                            return r * r * params.lambda_at(s) /
                                                   (2.0 * r - params.eta(s));
                                        },
                                        0.0, T);
    }
    const double scale = -target / K;

    ContinuousStrategy strat;
    strat.target = target;
    strat.sample_t.resize(n_samples);
    strat.density.resize(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const double t = T * k / (n_samples - 1);
        strat.sample_t[k] = t;
        strat.density[k] = scale * params.lambda_at(t) * block_density_clause(params, model, t);
    }
    strat.sample_t.back() = T;
    double xi0, xiT;
    if (model == Model::V) {
        xi0 = scale * params.lambda_at(0.0) * ratio_v(params, 0.0);
        const double eT = params.eta(T);
        const double rT = params.rho_at(T);
        xiT = scale * params.lambda_at(T) * (eT + rT) / (2.0 * rT + eT);
    } else {
        const double e0 = params.eta(0.0);
        const double r0 = params.rho_at(0.0);
        xi0 = scale * params.lambda_at(0.0) * (r0 - e0) / (2.0 * r0 - e0);
        const double rT = params.rho_at(T);
        xiT = scale * params.lambda_at(T) * rT / (2.0 * rT - params.eta(T));
    }
    strat.impulses = {{0.0, xi0}, {T, xiT}};

    BlockSolution sol;
    sol.model = model;
    sol.K = K;
    sol.cost = target * target / (2.0 * K);
    sol.strategy = std::move(strat);
    return sol;
}

ConditionReport pms_condition_block(const MarketParams& params, Model model, int grid_density) {
    const double s = model == Model::V ? 1.0 : -1.0;
    for (int k = 0; k <= grid_density; ++k) {
        const double t = params.horizon * k / grid_density;
        const double v = 2.0 * params.rho_at(t) + s * params.eta(t);
        if (v < -kClauseTol) return {false, 1, t};
    }
    return {true, 0, std::nullopt};
}

ConditionReport ttpm_condition_block(const MarketParams& params, Model model, int grid_density) {
    const double s = model == Model::V ? 1.0 : -1.0;
    for (int k = 0; k <= grid_density; ++k) {
        const double t = params.horizon * k / grid_density;
        const double level = params.rho_at(t) + s * params.eta(t);
        if (level < -kClauseTol) return {false, 1, t};
    }
    for (int k = 0; k <= grid_density; ++k) {
        const double t = params.horizon * k / grid_density;
        if (block_density_clause(params, model, t) < -kClauseTol) return {false, 2, t};
    }
    return {true, 0, std::nullopt};
}

SignConditionReport discrete_sign_condition_block(const GridCoefficients& coeffs, Model model) {
    const int n = static_cast<int>(coeffs.a.size());
    const auto& a = coeffs.a;
    if (model == Model::V) {
        const auto& b = coeffs.a_tilde;
        auto term = [&](int i) { return (1.0 - b[i]) / (1.0 - a[i] * b[i]); };
        for (int i = 0; i + 1 < n; ++i) {
            if (term(i) < a[i + 1] * term(i + 1) - kClauseTol) return {false, i + 1};
        }
        if (b[n - 1] > 1.0 + kClauseTol) return {false, n};
        return {true, 0};
    }
    const auto& b = coeffs.a_hat;
    auto term = [&](int i) { return (1.0 - b[i]) / (1.0 - a[i] * b[i]); };
    for (int i = 0; i + 1 < n; ++i) {
        if (term(i + 1) < a[i] * term(i) - kClauseTol) return {false, i + 1};
    }
    if (!(b[0] < 1.0)) return {false, 1};  // strict, as printed
    return {true, 0};
}

std::pair<TimeGrid, MarketParams> time_reversal_dual(const TimeGrid& grid,
                                                     const MarketParams& params) {
    TimeGrid dual;
    dual.times.resize(grid.times.size());
    const double T = params.horizon;
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
        dual.times[i] = T - grid.times[grid.times.size() - 1 - i];
    }
    dual.times.front() = 0.0;
    dual.times.back() = T;
    return {std::move(dual), params.reversed()};
}

}  // namespace lobexec
