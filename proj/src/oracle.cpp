#include "lobexec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lobexec/errors.hpp"
#include "lobexec/numerics.hpp"

namespace lobexec {

namespace {

// Gaussian elimination with partial pivoting; overwrites its inputs.
std::vector<double> gaussian_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
        }
        if (std::abs(A[pivot][col]) < 1e-14) {
            throw SingularSystem("KKT matrix is singular at column " + std::to_string(col));
        }
        std::swap(A[col], A[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = A[r][col] / A[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r][c] -= factor * A[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t rr = n; rr-- > 0;) {
        double s = b[rr];
        for (std::size_t c = rr + 1; c < n; ++c) s -= A[rr][c] * x[c];
        x[rr] = s / A[rr][rr];
    }
    return x;
}

double smallest_eigenvalue(const std::vector<std::vector<double>>& M) {
    const std::size_t n = M.size();
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(M[i][j]);
        bound = std::max(bound, row);
    }
    // Power iteration on bound*I - M converges to bound - lambda_min.
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / (1.0 + static_cast<double>(i));
    double mu = 0.0;
    for (int it = 0; it < 500; ++it) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = bound * v[i];
            for (std::size_t j = 0; j < n; ++j) acc -= M[i][j] * v[j];
            w[i] = acc;
        }
        double norm = 0.0;
        for (double val : w) norm += val * val;
        norm = std::sqrt(norm);
        if (norm == 0.0) return bound;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        mu = norm;
    }
    return bound - mu;
}

double gradient_spread(const std::vector<double>& g) {
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    double dev = 0.0;
    for (double v : g) dev = std::max(dev, std::abs(v - mean));
    return dev;
}

}  // namespace

std::vector<std::vector<double>> impact_matrix(const TimeGrid& grid, const MarketParams& params,
                                               Model model) {
    const std::size_t n = grid.times.size();
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        cum[i] = cum[i - 1] + params.rho.integral(grid.times[i - 1], grid.times[i]);
    }
    std::vector<std::vector<double>> M(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double decay = std::exp(-std::abs(cum[i] - cum[j]));
            const double t = model == Model::V ? std::max(grid.times[i], grid.times[j])
                                               : std::min(grid.times[i], grid.times[j]);
            M[i][j] = decay / params.lambda_at(t);
        }
    }
    return M;
}

OracleResult oracle_block(double target, const TimeGrid& grid, const MarketParams& params,
                          Model model) {
    grid.validate(params.horizon);
    const auto M = impact_matrix(grid, params, model);
    const std::size_t n = M.size();
    std::vector<std::vector<double>> kkt(n + 1, std::vector<double>(n + 1, 0.0));
    std::vector<double> rhs(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) kkt[i][j] = M[i][j];
        kkt[i][n] = 1.0;
        kkt[n][i] = 1.0;
    }
    rhs[n] = -target;
    const auto sol = gaussian_solve(kkt, rhs);

    OracleResult res;
    res.trades.assign(sol.begin(), sol.begin() + static_cast<long>(n));
    double cost = 0.0;
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) g[i] += M[i][j] * res.trades[j];
        cost += 0.5 * g[i] * res.trades[i];
    }
    res.cost = cost;
    res.iterations = 1;
    res.kkt_residual = gradient_spread(g);
    const double lam_min = smallest_eigenvalue(M);
    res.negative_curvature = lam_min < -1e-12;
    res.converged = !res.negative_curvature;
    return res;
}

std::vector<double> analytic_gradient(const DiscreteStrategy& strategy, Model model,
                                      const MarketParams& params, const Shape& shape) {
    const int n = strategy.grid.intervals();
    const auto& t = strategy.grid.times;
    const auto& xi = strategy.trades;
    const auto coeffs = grid_coefficients(params, strategy.grid);
    auto lam = [&](int i) { return params.lambda_at(t[i]); };
    std::vector<double> g(n + 1, 0.0);

    if (model == Model::V) {
        std::vector<double> E(n + 1, 0.0);
        for (int k = 1; k <= n; ++k) E[k] = coeffs.a[k - 1] * (E[k - 1] + xi[k - 1]);
        g[n] = shape.F_inv((E[n] + xi[n]) / lam(n));
        for (int i = n - 1; i >= 0; --i) {
            g[i] = shape.F_inv((E[i] + xi[i]) / lam(i)) -
                   coeffs.a[i] * shape.F_inv(E[i + 1] / lam(i + 1)) + coeffs.a[i] * g[i + 1];
        }
        return g;
    }

    // Model P: pre-trade D, post-trade P; D_{k+1} = a_{k+1} * P_k.
    std::vector<double> pre(n + 1, 0.0), post(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        if (k > 0) pre[k] = coeffs.a[k - 1] * post[k - 1];
        post[k] = shape.F_inv(xi[k] / lam(k) + shape.F(pre[k]));
    }
    g[n] = post[n];
    for (int i = n - 1; i >= 0; --i) {
        double ratio;
        if (shape.closed_form()) {
            ratio = std::pow(coeffs.a[i], shape.gamma());  // f(a*P)/f(P) for power laws
        } else {
            const double fp = shape.density(post[i]);
            ratio = fp > 0.0 ? shape.density(pre[i + 1]) / fp : 1.0;
        }
        g[i] = post[i] + coeffs.a_hat[i] * ratio * (g[i + 1] - pre[i + 1]);
    }
    return g;
}

std::vector<double> finite_diff_gradient(const DiscreteStrategy& strategy, Model model,
                                         const MarketParams& params, const Shape& shape,
                                         double h) {
    if (h <= 0.0) {
        double max_abs = 0.0;
        for (double v : strategy.trades) max_abs = std::max(max_abs, std::abs(v));
        h = 1e-6 * (1.0 + max_abs);
    }
    std::vector<double> g(strategy.trades.size());
    DiscreteStrategy probe = strategy;
    for (std::size_t i = 0; i < g.size(); ++i) {
        probe.trades[i] = strategy.trades[i] + h;
        const double up = discrete_cost(probe, model, params, shape).cost;
        probe.trades[i] = strategy.trades[i] - h;
        const double dn = discrete_cost(probe, model, params, shape).cost;
        probe.trades[i] = strategy.trades[i];
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

OracleResult oracle_general(double target, const TimeGrid& grid, const MarketParams& params,
                            const Shape& shape, Model model, int max_iter) {
    grid.validate(params.horizon);
    const int n = grid.intervals();
    if (n + 1 > 13) throw ConfigError("oracle_general is meant for desk scale (N <= 12)");

    DiscreteStrategy cur;
    cur.grid = grid;
    cur.target = target;
    cur.trades.assign(n + 1, -target / (n + 1));

    auto cost_of = [&](const DiscreteStrategy& s) {
        return discrete_cost(s, model, params, shape).cost;
    };

    {  // Validate the recursion against finite differences before descending.
        const auto ga = analytic_gradient(cur, model, params, shape);
        const auto gf = finite_diff_gradient(cur, model, params, shape);
        double scale = 1.0;
        for (double v : ga) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < ga.size(); ++i) {
            if (std::abs(ga[i] - gf[i]) > 1e-6 * scale) {
                throw NumericalError("gradient recursion disagrees with finite differences");
            }
        }
    }

    OracleResult res;
    res.trades = cur.trades;
    double cost = cost_of(cur);
    std::vector<double> pg_prev, x_prev;
    double step = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        auto g = analytic_gradient(cur, model, params, shape);
        const double mean = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
        std::vector<double> pg(g.size());
        double norm2 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            pg[i] = g[i] - mean;
            norm2 += pg[i] * pg[i];
        }
        const double norm = std::sqrt(norm2);
        if (norm < 1e-10) {
            res.converged = true;
            break;
        }
        // Barzilai-Borwein step seed, Armijo backtracking safeguard.
        if (!x_prev.empty()) {
            double sy = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < pg.size(); ++i) {
                const double s = cur.trades[i] - x_prev[i];
                const double y = pg[i] - pg_prev[i];
                sy += s * y;
                ss += s * s;
            }
            step = (sy > 1e-300) ? ss / sy : 1.0 / (1.0 + norm);
        } else {
            step = 0.1 * (1.0 + std::abs(target)) / (1.0 + norm);
        }
        x_prev = cur.trades;
        pg_prev = pg;
        DiscreteStrategy trial = cur;
        double new_cost = cost;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < pg.size(); ++i) {
                trial.trades[i] = cur.trades[i] - step * pg[i];
            }
            new_cost = cost_of(trial);
            if (new_cost <= cost - 1e-4 * step * norm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // stalled at numerical floor
        cur.trades = trial.trades;
        cost = new_cost;
    }
    res.trades = cur.trades;
    res.cost = cost;
    res.iterations = it;
    const auto g = analytic_gradient(cur, model, params, shape);
    res.kkt_residual = gradient_spread(g);
    if (!res.converged) {
        double norm2 = 0.0;
        const double mean = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
        for (double v : g) norm2 += (v - mean) * (v - mean);
        res.converged = std::sqrt(norm2) < 1e-10;
    }
    return res;
}

}  // namespace lobexec
