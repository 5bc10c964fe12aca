#include "lobexec/general_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lobexec/errors.hpp"
#include "lobexec/numerics.hpp"

namespace lobexec {

namespace {

constexpr double kClauseTol = 1e-12;

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_trade_sum(const std::vector<double>& trades, double target) {
    double s = 0.0;
    for (double xi : trades) s += xi;
    if (std::abs(s + target) > 1e-9 * (1.0 + std::abs(target))) {
        throw NumericalError("assembled trades do not sum to -target (residual " +
                             std::to_string(s + target) + ")");
    }
}

void warn_if_sign_off(GeneralSolution& sol, double first, double last, double target) {
    const double want = sign_of(-target);
    const double tol = 1e-12 * (1.0 + std::abs(target));
    if (want != 0.0 && (first * want < -tol || last * want < -tol)) {
        sol.warnings.push_back("first/last trade sign differs from -target");
    }
}

// d/dt of the closed-form h coefficient over its value, for the analytic
// zeta derivative of block/power-law shapes.
double closed_coef_log_derivative(const MarketParams& p, const Shape& shape, Model model,
                                  double t) {
    const double g = shape.gamma();
    const double r = p.rho_at(t);
    const double e = p.eta(t);
    const double rp = p.rho.derivative(t);
    const double ep = p.eta_prime(t);
    if (model == Model::V) {
        const double num = r * (2.0 + g) + e;
        return (rp * (2.0 + g) + ep) / num - rp / r;
    }
    const double num = r * (2.0 + g) - e;
    const double den = r * (1.0 + g) - e;
    return (rp * (2.0 + g) - ep) / num - (rp * (1.0 + g) - ep) / den;
}

}  // namespace

GeneralSolution solve_general_discrete(double target, const TimeGrid& grid,
                                       const MarketParams& params, const Shape& shape,
                                       Model model) {
    grid.validate(params.horizon);
    const auto coeffs = grid_coefficients(params, grid);
    const int n = grid.intervals();
    const auto& t = grid.times;
    auto lam = [&](int i) { return params.lambda_at(t[i]); };

    GeneralSolution sol;
    sol.model = model;
    const auto assumption =
        assumption_check(shape, params, model == Model::V ? AssumptionId::a2_1 : AssumptionId::a2_2);
    if (!assumption.pass) {
        sol.warnings.push_back("assumption not satisfied: " + assumption.detail +
                               " (uniqueness/sign guarantees void)");
    }

    std::vector<HFunction> h;
    h.reserve(n);
    for (int i = 0; i < n; ++i) {
        h.push_back(model == Model::V
                        ? HFunction::v_discrete(coeffs.a[i], coeffs.a_tilde[i], shape)
                        : HFunction::p_discrete(coeffs.a[i], coeffs.a_hat[i], shape));
    }

    double nu = 0.0;
    if (target != 0.0) {
        auto lhs = [&](double v) {
            double s = lam(n) * shape.F(v);
            for (int i = 1; i <= n; ++i) {
                const double z = h[i - 1].invert(v);
                if (model == Model::V) {
                    s += lam(i - 1) * (1.0 - coeffs.a[i - 1]) * z;
                } else {
                    s += lam(i - 1) *
                         (shape.F(z / coeffs.a[i - 1]) - lam(i) / lam(i - 1) * shape.F(z));
                }
            }
            return s + target;
        };
        RootOptions opts;
        opts.f_tol = 1e-12;
        opts.f_scale = 1.0 + std::abs(target);
        nu = find_root_monotone(lhs, opts);
    }
    sol.nu = nu;

    std::vector<double> xi(n + 1, 0.0);
    if (target != 0.0) {
        if (model == Model::V) {
            xi[0] = lam(0) * h[0].invert(nu);
            for (int i = 1; i <= n - 1; ++i) {
                xi[i] = lam(i) * h[i].invert(nu) - lam(i - 1) * coeffs.a[i - 1] * h[i - 1].invert(nu);
            }
            xi[n] = lam(n) * shape.F(nu) - lam(n - 1) * coeffs.a[n - 1] * h[n - 1].invert(nu);
        } else {
            xi[0] = lam(0) * shape.F(h[0].invert(nu) / coeffs.a[0]);
            for (int i = 1; i <= n - 1; ++i) {
                xi[i] = lam(i) *
                        (shape.F(h[i].invert(nu) / coeffs.a[i]) - shape.F(h[i - 1].invert(nu)));
            }
            xi[n] = lam(n) * (shape.F(nu) - shape.F(h[n - 1].invert(nu)));
        }
        check_trade_sum(xi, target);
        warn_if_sign_off(sol, xi.front(), xi.back(), target);
    }

    DiscreteStrategy strat{grid, std::move(xi), target};
    sol.cost = discrete_cost(strat, model, params, shape).cost;
    sol.strategy = std::move(strat);
    return sol;
}

GeneralSolution solve_general_continuous(double target, const MarketParams& params,
                                         const Shape& shape, Model model, int n_samples) {
    if (n_samples < 3) throw ConfigError("need at least three density samples");
    const double T = params.horizon;

    GeneralSolution sol;
    sol.model = model;

    std::vector<double> ts(n_samples);
    for (int k = 0; k < n_samples; ++k) ts[k] = T * k / (n_samples - 1);
    ts.back() = T;

    if (target == 0.0) {
        ContinuousStrategy strat;
        strat.sample_t = ts;
        strat.density.assign(n_samples, 0.0);
        strat.impulses = {{0.0, 0.0}, {T, 0.0}};
        strat.target = 0.0;
        sol.zeta.assign(n_samples, 0.0);
        sol.strategy = std::move(strat);
        return sol;
    }

    // Bijectivity / condition checks ahead of the multiplier solve.
    if (model == Model::V) {
        const auto rep = assumption_check(shape, params, AssumptionId::thm_2_6);
        if (!rep.pass) {
            throw NonMonotone(rep.witness_t.value_or(0.0), rep.witness_t.value_or(0.0));
        }
    } else {
        const auto rep = assumption_check(shape, params, AssumptionId::thm_2_9);
        if (!rep.pass) {
            throw ConditionViolated("neither condition (i) nor (ii) holds: " + rep.detail);
        }
        if (rep.case_id == 2) {
            sol.case_two = true;
            sol.warnings.push_back("solved under condition (ii): h decreasing");
        }
    }
    if (shape.kind() == Shape::Kind::tabulated) {
        sol.warnings.push_back(model == Model::V
                                   ? "tabulated shape is C^1 only; best-effort mode"
                                   : "tabulated shape is not C^2; best-effort mode");
    }

    auto h_at = [&](double t) {
        return model == Model::V ? HFunction::v_continuous(params.rho_at(t), params.eta(t), shape)
                                 : HFunction::p_continuous(params.rho_at(t), params.eta(t), shape);
    };

    auto lhs = [&](double v) {
        auto integrand = [&](double u) {
            const double z = h_at(u).invert(v);
            const double lam = params.lambda_at(u);
            if (model == Model::V) return lam * params.rho_at(u) * z;
            return lam * (params.rho_at(u) * z * shape.density(z) -
                          params.eta(u) * shape.F(z));
        };
        return integrate(integrand, 0.0, T, 1e-12) + params.lambda_at(T) * shape.F(v) + target;
    };
    RootOptions opts;
    opts.f_tol = 1e-11;
    opts.f_scale = 1.0 + std::abs(target);
    const double nu = find_root_monotone(lhs, opts);
    sol.nu = nu;

    sol.zeta.resize(n_samples);
    for (int k = 0; k < n_samples; ++k) sol.zeta[k] = h_at(ts[k]).invert(nu);

    // d(zeta)/dt: analytic for closed-form shapes with analytic parameters,
    // otherwise second-order differences on the sample grid.
    std::vector<double> dzeta(n_samples);
    if (shape.closed_form() && params.analytic()) {
        for (int k = 0; k < n_samples; ++k) {
            const double dlog = closed_coef_log_derivative(params, shape, model, ts[k]);
            const double order = model == Model::V ? (shape.gamma() + 1.0) : 1.0;
            dzeta[k] = -order * sol.zeta[k] * dlog;
        }
    } else {
        const double dt = T / (n_samples - 1);
        for (int k = 1; k + 1 < n_samples; ++k) {
            dzeta[k] = (sol.zeta[k + 1] - sol.zeta[k - 1]) / (2.0 * dt);
        }
        dzeta[0] = (-3.0 * sol.zeta[0] + 4.0 * sol.zeta[1] - sol.zeta[2]) / (2.0 * dt);
        dzeta[n_samples - 1] = (3.0 * sol.zeta[n_samples - 1] - 4.0 * sol.zeta[n_samples - 2] +
                                sol.zeta[n_samples - 3]) /
                               (2.0 * dt);
    }

    ContinuousStrategy strat;
    strat.target = target;
    strat.sample_t = ts;
    strat.density.resize(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        const double lam = params.lambda_at(ts[k]);
        if (model == Model::V) {
            strat.density[k] =
                lam * (dzeta[k] + (params.rho_at(ts[k]) + params.eta(ts[k])) * sol.zeta[k]);
        } else {
            strat.density[k] = lam * shape.density(sol.zeta[k]) *
                               (dzeta[k] + params.rho_at(ts[k]) * sol.zeta[k]);
        }
    }
    double xi0, xiT;
    if (model == Model::V) {
        xi0 = params.lambda_at(0.0) * sol.zeta.front();
        xiT = params.lambda_at(T) * (shape.F(nu) - sol.zeta.back());
    } else {
        xi0 = params.lambda_at(0.0) * shape.F(sol.zeta.front());
        xiT = params.lambda_at(T) * (shape.F(nu) - shape.F(sol.zeta.back()));
    }
    strat.impulses = {{0.0, xi0}, {T, xiT}};
    warn_if_sign_off(sol, xi0, xiT, target);

    // Exact cost of the optimal path: both models reduce to
    // integral of lambda * [...] plus lambda(T) * F_tilde(nu).
    auto cost_integrand = [&](double u) {
        const double z = h_at(u).invert(nu);
        const double lam = params.lambda_at(u);
        const double r = params.rho_at(u);
        const double e = params.eta(u);
        if (model == Model::V) {
            return lam * ((r + e) * shape.F_inv(z) * z - e * shape.G(z));
        }
        return lam * (r * shape.density(z) * z * z - e * shape.F_tilde(z));
    };
    sol.cost = integrate(cost_integrand, 0.0, T, 1e-12) + params.lambda_at(T) * shape.F_tilde(nu);
    sol.strategy = std::move(strat);
    return sol;
}

PowerlawConditionReport powerlaw_conditions(const MarketParams& params, double gamma, Model model,
                                            int grid_density) {
    if (!(gamma > -1.0)) throw ConfigError("power-law exponent must exceed -1");
    PowerlawConditionReport rep;
    const double T = params.horizon;
    auto pms_val = [&](double t) {
        const double r = params.rho_at(t);
        const double e = params.eta(t);
        return model == Model::V ? r * (2.0 + gamma) + e : r * (2.0 + gamma) - e;
    };
    auto level_val = [&](double t) {
        const double r = params.rho_at(t);
        const double e = params.eta(t);
        return model == Model::V ? r + e : r * (1.0 + gamma) - e;
    };
    auto ratio = [&](double t) {
        const double r = params.rho_at(t);
        const double e = params.eta(t);
        if (model == Model::V) {
            const double d = r * (2.0 + gamma) + e;
            if (d == 0.0) throw DegenerateDenominator("rho*(2+gamma) + eta", t);
            return r * (1.0 + gamma) / d;
        }
        const double d = r * (2.0 + gamma) - e;
        if (d == 0.0) throw DegenerateDenominator("rho*(2+gamma) - eta", t);
        return (r * (1.0 + gamma) - e) / d;
    };
    auto ratio_prime = [&](double t) {
        if (params.analytic()) {
            const double r = params.rho_at(t);
            const double e = params.eta(t);
            const double rp = params.rho.derivative(t);
            const double ep = params.eta_prime(t);
            if (model == Model::V) {
                const double d = r * (2.0 + gamma) + e;
                return (1.0 + gamma) * (rp * e - r * ep) / (d * d);
            }
            const double d = r * (2.0 + gamma) - e;
            return ((rp * (1.0 + gamma) - ep) * d -
                    (r * (1.0 + gamma) - e) * (rp * (2.0 + gamma) - ep)) /
                   (d * d);
        }
        const double h = std::max(1e-6, 1e-8 * T);
        const double lo = std::max(0.0, t - h);
        const double hi = std::min(T, t + h);
        return (ratio(hi) - ratio(lo)) / (hi - lo);
    };
    auto deriv_val = [&](double t) {
        const double r = params.rho_at(t);
        const double e = params.eta(t);
        if (model == Model::V) {
            const double d = r * (2.0 + gamma) + e;
            return ratio_prime(t) + r * (r + e) / d;
        }
        // Second clause of the power-law P corollary, with its printed
        // denominator rho*(2+gamma) + eta.
        const double d = r * (2.0 + gamma) + e;
        if (d == 0.0) throw DegenerateDenominator("rho*(2+gamma) + eta", t);
        return ratio_prime(t) + r * (r * (1.0 + gamma) - e) / d;
    };
    for (int k = 0; k <= grid_density && rep.pms.holds; ++k) {
        const double t = T * k / grid_density;
        if (pms_val(t) < -kClauseTol) rep.pms = {false, t};
    }
    for (int k = 0; k <= grid_density && rep.ttpm_level.holds; ++k) {
        const double t = T * k / grid_density;
        if (level_val(t) < -kClauseTol) rep.ttpm_level = {false, t};
    }
    for (int k = 0; k <= grid_density && rep.ttpm_derivative.holds; ++k) {
        const double t = T * k / grid_density;
        if (deriv_val(t) < -kClauseTol) rep.ttpm_derivative = {false, t};
    }
    return rep;
}

AssumptionReport assumption_check(const Shape& shape, const MarketParams& params,
                                  AssumptionId which, int t_samples, int x_samples,
                                  double x_range) {
    AssumptionReport rep;
    rep.which = which;
    const double T = params.horizon;

    // Sample grid over x avoiding 0 (power laws can be singular there).
    std::vector<double> xs;
    xs.reserve(2 * x_samples);
    for (int k = 1; k <= x_samples; ++k) {
        xs.push_back(-x_range * k / x_samples);
    }
    std::sort(xs.begin(), xs.end());
    const std::size_t negatives = xs.size();
    for (int k = 1; k <= x_samples; ++k) xs.push_back(x_range * k / x_samples);

    auto fail = [&](std::optional<double> wx, std::optional<double> wt, std::string why) {
        rep.pass = false;
        rep.witness_x = wx;
        rep.witness_t = wt;
        rep.detail = std::move(why);
        return rep;
    };

    auto shape_monotone = [&](bool inc_neg) -> std::optional<double> {
        // inc_neg: f nondecreasing on the negatives (and nonincreasing on the
        // positives); otherwise the opposite pattern.
        for (std::size_t k = 1; k < xs.size(); ++k) {
            const bool neg_side = k < negatives;
            if (k == negatives) continue;  // crossing 0
            const double f0 = shape.density(xs[k - 1]);
            const double f1 = shape.density(xs[k]);
            const double d = f1 - f0;
            const bool want_up = neg_side ? inc_neg : !inc_neg;
            const double tol = kClauseTol * (1.0 + std::abs(f0));
            if (want_up ? (d < -tol) : (d > tol)) return xs[k];
        }
        return std::nullopt;
    };

    switch (which) {
        case AssumptionId::a2_1: {
            if (auto wx = shape_monotone(true)) {
                return fail(wx, std::nullopt, "f must be nondecreasing on R- and nonincreasing on R+");
            }
            for (int k = 0; k <= t_samples; ++k) {
                const double t = T * k / t_samples;
                if (params.rho_at(t) + params.eta(t) < -kClauseTol) {
                    return fail(std::nullopt, t, "rho + eta >= 0 fails");
                }
            }
            rep.detail = "f unimodal at 0 and rho+eta >= 0";
            return rep;
        }
        case AssumptionId::a2_2: {
            if (auto wx = shape_monotone(false)) {
                return fail(wx, std::nullopt, "f must be nonincreasing on R- and nondecreasing on R+");
            }
            for (int k = 0; k <= t_samples; ++k) {
                const double t = T * k / t_samples;
                if (!(params.rho_at(t) - params.eta(t) > 0.0)) {
                    return fail(std::nullopt, t, "rho - eta > 0 fails");
                }
            }
            // x f'(x)/f(x) nondecreasing on R-, nonincreasing on R+.
            auto w = [&](double x) { return x * shape.density_prime(x) / shape.density(x); };
            if (!shape.closed_form()) {
                for (std::size_t k = 1; k < xs.size(); ++k) {
                    if (k == negatives) continue;
                    const double d = w(xs[k]) - w(xs[k - 1]);
                    const bool want_up = k < negatives;
                    if (want_up ? (d < -1e-9) : (d > 1e-9)) {
                        return fail(xs[k], std::nullopt, "x f'/f monotonicity fails");
                    }
                }
            }
            rep.detail = "f unimodal away from 0, rho-eta > 0, x f'/f monotone";
            return rep;
        }
        case AssumptionId::thm_2_6: {
            for (int k = 0; k <= t_samples; ++k) {
                const double t = T * k / t_samples;
                if (shape.closed_form()) {
                    const double v =
                        params.rho_at(t) * (2.0 + shape.gamma()) + params.eta(t);
                    if (!(v > 0.0)) return fail(std::nullopt, t, "rho*(2+gamma)+eta <= 0");
                } else {
                    const auto h = HFunction::v_continuous(params.rho_at(t), params.eta(t), shape);
                    double prev = h.eval(xs.front());
                    for (std::size_t k2 = 1; k2 < xs.size(); ++k2) {
                        const double cur = h.eval(xs[k2]);
                        if (!(cur > prev)) return fail(xs[k2], t, "h_V not increasing");
                        prev = cur;
                    }
                }
            }
            rep.detail = "h_V increasing bijection on the sample grid";
            return rep;
        }
        case AssumptionId::thm_2_9: {
            bool case1 = true;
            bool case2 = true;
            std::optional<double> w1x, w1t, w2x, w2t;
            for (int k = 0; k <= t_samples; ++k) {
                const double t = T * k / t_samples;
                const double r = params.rho_at(t);
                const double e = params.eta(t);
                for (double x : xs) {
                    const double w = x * shape.density_prime(x) / shape.density(x);
                    const double d1 = r * (1.0 + w) - e;
                    const double d2 = r * (2.0 + w) - e;
                    if (case1 && !(d1 > 0.0)) {
                        case1 = false;
                        w1x = x;
                        w1t = t;
                    }
                    if (case2 && !(d1 < 0.0 && d2 > 0.0)) {
                        case2 = false;
                        w2x = x;
                        w2t = t;
                    }
                    if (!case1 && !case2) break;
                }
                if (!case1 && !case2) break;
            }
            if (case1) {
                rep.case_id = 1;
                rep.detail = "condition (i): rho*(1+x f'/f) - eta > 0";
                return rep;
            }
            if (case2) {
                rep.case_id = 2;
                rep.detail = "condition (ii): h decreasing bijection";
                return rep;
            }
            return fail(w1x, w1t, "condition (i) and (ii) both fail");
        }
    }
    return rep;
}

}  // namespace lobexec
