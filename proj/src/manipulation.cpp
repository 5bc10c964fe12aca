#include "lobexec/manipulation.hpp"

#include <algorithm>
#include <cmath>

#include "lobexec/errors.hpp"

namespace lobexec {

double round_trip_cost(const MarketParams& params, const Shape& shape, Model model, double t1,
                       double t2, double size) {
    if (!(0.0 < t1 && t1 < t2 && t2 <= params.horizon)) {
        throw ConfigError("round trip needs 0 < t1 < t2 <= horizon");
    }
    DiscreteStrategy strat;
    strat.grid.times = {0.0, t1, t2};
    strat.trades = {0.0, size, -size};
    if (t2 < params.horizon) {  // pad so the grid ends at the horizon
        strat.grid.times.push_back(params.horizon);
        strat.trades.push_back(0.0);
    }
    strat.target = 0.0;
    return discrete_cost(strat, model, params, shape).cost;
}

ManipulationReport search_pms(const MarketParams& params, const Shape& shape, Model model,
                              const PmsSearchOptions& opts) {
    ManipulationReport report;
    const double T = params.horizon;
    double best = 0.0;
    PmsWitness best_witness;
    for (int j = 0; j < opts.t1_count; ++j) {
        const double t1 = T * (j + 0.5) / opts.t1_count;
        for (double gf : opts.gap_fractions) {
            const double t2 = t1 + gf * T;
            if (t2 > T) continue;
            for (double sf : opts.size_factors) {
                const double size = sf * opts.scale;
                const double c = round_trip_cost(params, shape, model, t1, t2, size);
                if (c < best) {
                    best = c;
                    best_witness = {t1, t2, size, c};
                }
            }
        }
    }
    const double cutoff = opts.threshold * opts.scale * opts.scale;
    if (best < cutoff) {
        if (opts.refine) {
            // Golden-section sweep on t2 with t1 and size fixed.
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double lo = best_witness.t1 + 1e-12 * T;
            double hi = std::min(T, best_witness.t1 + 2.0 * (best_witness.t2 - best_witness.t1));
            auto value = [&](double t2) {
                return round_trip_cost(params, shape, model, best_witness.t1, t2,
                                       best_witness.size);
            };
            double x1 = hi - gr * (hi - lo);
            double x2 = lo + gr * (hi - lo);
            double f1 = value(x1);
            double f2 = value(x2);
            for (int it = 0; it < 60 && (hi - lo) > 1e-10 * T; ++it) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = value(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = value(x2);
                }
            }
            const double t2 = 0.5 * (lo + hi);
            const double c = value(t2);
            if (c < best_witness.cost) {
                best_witness.t2 = t2;
                best_witness.cost = c;
            }
        }
        report.pms_found = true;
        report.witness = best_witness;
    }
    return report;
}

namespace {

void count_signs(ManipulationReport& rep, double value, double tol) {
    if (value > tol) {
        ++rep.positive_trades;
    } else if (value < -tol) {
        ++rep.negative_trades;
    }
}

}  // namespace

ManipulationReport classify_ttpm(
    const std::variant<DiscreteStrategy, ContinuousStrategy>& strategy, double target) {
    ManipulationReport rep;
    double max_abs = 0.0;
    auto scan = [&](auto&& visit_trades) {
        visit_trades([&](double v) { max_abs = std::max(max_abs, std::abs(v)); });
        const double tol = 1e-9 * max_abs;
        visit_trades([&](double v) { count_signs(rep, v, tol); });
    };
    if (const auto* d = std::get_if<DiscreteStrategy>(&strategy)) {
        scan([&](auto&& fn) {
            for (double v : d->trades) fn(v);
        });
    } else {
        const auto& c = std::get<ContinuousStrategy>(strategy);
        scan([&](auto&& fn) {
            for (const auto& imp : c.impulses) fn(imp.size);
            for (double v : c.density) fn(v);
        });
    }
    if (target > 0.0) {
        rep.ttpm_found = rep.positive_trades > 0;  // sell program with buys
    } else if (target < 0.0) {
        rep.ttpm_found = rep.negative_trades > 0;  // buy program with sells
    }
    return rep;
}

}  // namespace lobexec
