#include "lobexec/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lobexec/errors.hpp"

namespace lobexec {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double parsed = 0.0;
        std::sscanf(buf, "%lf", &parsed);
        if (parsed == v) break;
    }
    return buf;
}

json to_json(const TimeFunction& fn) {
    return std::visit(
        [&](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TimeFunction::Constant>) {
                return {{"kind", "constant"}, {"value", n.value}};
            } else if constexpr (std::is_same_v<T, TimeFunction::Sinusoid>) {
                return {{"kind", "sinusoid"},
                        {"base", n.base},
                        {"amplitude", n.amplitude},
                        {"omega", n.omega}};
            } else if constexpr (std::is_same_v<T, TimeFunction::PiecewiseLinear>) {
                json knots = json::array();
                for (std::size_t k = 0; k < n.t.size(); ++k) {
                    knots.push_back({n.t[k], n.v[k]});
                }
                return {{"kind", "piecewise_linear"}, {"knots", knots}};
            } else {
                json inner = to_json(*n.inner);
                return {{"kind", "reflected"}, {"horizon", n.horizon}, {"inner", inner}};
            }
        },
        fn.node());
}

TimeFunction time_function_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw ConfigError("time function descriptor needs a \"kind\"");
    }
    const std::string kind = j.at("kind");
    if (kind == "constant") return TimeFunction::constant(j.at("value").get<double>());
    if (kind == "sinusoid") {
        return TimeFunction::sinusoid(j.at("base").get<double>(),
                                      j.at("amplitude").get<double>(),
                                      j.at("omega").get<double>());
    }
    if (kind == "piecewise_linear") {
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : j.at("knots")) {
            knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
        }
        return TimeFunction::piecewise_linear(std::move(knots));
    }
    if (kind == "reflected") {
        return time_function_from_json(j.at("inner")).reversed(j.at("horizon").get<double>());
    }
    throw ConfigError("unknown time function kind: " + kind);
}

json to_json(const Shape& shape) {
    switch (shape.kind()) {
        case Shape::Kind::block:
            return {{"kind", "block"}};
        case Shape::Kind::power_law:
            return {{"kind", "power_law"}, {"gamma", shape.gamma()}};
        case Shape::Kind::tabulated:
            break;
    }
    return {{"kind", "tabulated"}};  // tables are inputs, not round-tripped
}

Shape shape_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("shape needs a \"kind\"");
    const std::string kind = j.at("kind");
    if (kind == "block") return Shape::block();
    if (kind == "power_law") return Shape::power_law(j.at("gamma").get<double>());
    if (kind == "tabulated") {
        return Shape::tabulated(j.at("x").get<std::vector<double>>(),
                                j.at("f").get<std::vector<double>>());
    }
    throw ConfigError("unknown shape kind: " + kind);
}

std::string model_name(Model model) { return model == Model::V ? "V" : "P"; }

Model model_from_name(const std::string& name) {
    if (name == "V" || name == "v") return Model::V;
    if (name == "P" || name == "p") return Model::P;
    throw ConfigError("model must be \"V\" or \"P\"");
}

Scenario scenario_from_json(const json& j) {
    try {
        Scenario sc{MarketParams{time_function_from_json(j.at("params").at("lambda")),
                                 time_function_from_json(j.at("params").at("rho")),
                                 j.at("params").at("T").get<double>()},
                    shape_from_json(j.at("shape")),
                    Model::V,
                    Mode::discrete,
                    0.0,
                    std::nullopt,
                    std::nullopt};
        sc.model = model_from_name(j.at("model").get<std::string>());
        sc.target = j.at("x").get<double>();
        if (j.contains("mode")) {
            const std::string m = j.at("mode");
            if (m == "discrete") {
                sc.mode = Mode::discrete;
            } else if (m == "continuous") {
                sc.mode = Mode::continuous;
            } else {
                throw ConfigError("mode must be \"discrete\" or \"continuous\"");
            }
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            TimeGrid grid;
            if (g.is_object() && g.contains("regular")) {
                grid = TimeGrid::regular(g.at("regular").get<int>(), sc.params.horizon);
            } else if (g.is_object() && g.contains("times")) {
                grid.times = g.at("times").get<std::vector<double>>();
            } else {
                throw ConfigError("grid must be {\"regular\":N} or {\"times\":[...]}");
            }
            sc.grid = std::move(grid);
        }
        if (j.contains("s0")) sc.s0 = j.at("s0").get<double>();
        sc.params.validate();
        if (sc.mode == Mode::discrete && !sc.grid) {
            throw ConfigError("discrete mode needs a grid");
        }
        if (sc.grid) sc.grid->validate(sc.params.horizon);
        return sc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
}

json to_json(const CostReport& report) {
    json per = json::array();
    for (const auto& tr : report.per_trade) {
        per.push_back({{"t", tr.t}, {"xi", tr.size}, {"cash", tr.cash}});
    }
    json out{{"model", model_name(report.model)}, {"cost", report.cost}, {"per_trade", per}};
    if (report.full_cost) out["full_cost"] = *report.full_cost;
    return out;
}

namespace {

json strategy_to_json(const std::variant<DiscreteStrategy, ContinuousStrategy>& strategy) {
    if (const auto* d = std::get_if<DiscreteStrategy>(&strategy)) {
        json trades = json::array();
        for (std::size_t i = 0; i < d->trades.size(); ++i) {
            trades.push_back({{"t", d->grid.times[i]}, {"xi", d->trades[i]}});
        }
        return {{"kind", "discrete"}, {"trades", trades}};
    }
    const auto& c = std::get<ContinuousStrategy>(strategy);
    json samples = json::array();
    for (std::size_t k = 0; k < c.sample_t.size(); ++k) {
        samples.push_back({c.sample_t[k], c.density[k]});
    }
    return {{"kind", "continuous"},
            {"xi0", c.xi0()},
            {"xiT", c.xiT()},
            {"samples", samples}};
}

}  // namespace

json to_json(const BlockSolution& sol) {
    return {{"model", model_name(sol.model)},
            {"K", sol.K},
            {"cost", sol.cost},
            {"strategy", strategy_to_json(sol.strategy)}};
}

json to_json(const GeneralSolution& sol) {
    json out{{"model", model_name(sol.model)},
             {"nu", sol.nu},
             {"cost", sol.cost},
             {"warnings", sol.warnings},
             {"strategy", strategy_to_json(sol.strategy)}};
    if (sol.case_two) out["case"] = "ii";
    return out;
}

json to_json(const ManipulationReport& report) {
    json out{{"pms_found", report.pms_found},
             {"ttpm_found", report.ttpm_found},
             {"positive_trades", report.positive_trades},
             {"negative_trades", report.negative_trades}};
    if (report.witness) {
        out["witness"] = {{"t1", report.witness->t1},
                          {"t2", report.witness->t2},
                          {"x", report.witness->size},
                          {"cost", report.witness->cost}};
    }
    return out;
}

json to_json(const OracleResult& result) {
    return {{"trades", result.trades},
            {"cost", result.cost},
            {"iterations", result.iterations},
            {"converged", result.converged},
            {"kkt_residual", result.kkt_residual},
            {"negative_curvature", result.negative_curvature}};
}

json to_json(const PdReport& report) {
    json out{{"positive_definite", report.positive_definite}};
    if (!report.positive_definite) out["witness_index"] = report.witness_index;
    return out;
}

json to_json(const ConditionReport& report) {
    json out{{"holds", report.holds}};
    if (!report.holds) {
        out["failing_clause"] = report.failing_clause;
        if (report.witness_t) out["witness_t"] = *report.witness_t;
    }
    return out;
}

json to_json(const SignConditionReport& report) {
    json out{{"holds", report.holds}};
    if (!report.holds) out["witness_index"] = report.witness_index;
    return out;
}

json to_json(const PowerlawConditionReport& report) {
    auto clause = [](const ClauseReport& c) {
        json out{{"holds", c.holds}};
        if (c.witness_t) out["witness_t"] = *c.witness_t;
        return out;
    };
    return {{"pms", clause(report.pms)},
            {"ttpm_level", clause(report.ttpm_level)},
            {"ttpm_derivative", clause(report.ttpm_derivative)}};
}

json to_json(const AssumptionReport& report) {
    static const char* names[] = {"a2_1", "a2_2", "thm_2_6", "thm_2_9"};
    json out{{"which", names[static_cast<int>(report.which)]},
             {"pass", report.pass},
             {"detail", report.detail}};
    if (report.witness_x) out["witness_x"] = *report.witness_x;
    if (report.witness_t) out["witness_t"] = *report.witness_t;
    if (report.case_id) out["case"] = report.case_id;
    return out;
}

void write_strategy_csv(std::ostream& out,
                        const std::variant<DiscreteStrategy, ContinuousStrategy>& strategy,
                        const std::vector<std::pair<double, double>>* clause_curve) {
    out << "t,trade_impulse,trade_density,clause_value\n";
    struct Row {
        double t;
        std::optional<double> impulse, density, clause;
    };
    std::vector<Row> rows;
    if (const auto* d = std::get_if<DiscreteStrategy>(&strategy)) {
        for (std::size_t i = 0; i < d->trades.size(); ++i) {
            rows.push_back({d->grid.times[i], d->trades[i], std::nullopt, std::nullopt});
        }
    } else {
        const auto& c = std::get<ContinuousStrategy>(strategy);
        for (const auto& imp : c.impulses) {
            rows.push_back({imp.t, imp.size, std::nullopt, std::nullopt});
        }
        for (std::size_t k = 0; k < c.sample_t.size(); ++k) {
            rows.push_back({c.sample_t[k], std::nullopt, c.density[k], std::nullopt});
        }
    }
    if (clause_curve) {
        for (const auto& [t, v] : *clause_curve) {
            rows.push_back({t, std::nullopt, std::nullopt, v});
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.t < b.t; });
    // Merge rows that share a time stamp so each time appears once.
    std::vector<Row> merged;
    for (const auto& r : rows) {
        if (!merged.empty() && merged.back().t == r.t) {
            auto& m = merged.back();
            if (r.impulse) m.impulse = m.impulse ? *m.impulse + *r.impulse : *r.impulse;
            if (r.density) m.density = r.density;
            if (r.clause) m.clause = r.clause;
        } else {
            merged.push_back(r);
        }
    }
    auto cell = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    for (const auto& r : merged) {
        out << format_double(r.t) << ',' << cell(r.impulse) << ',' << cell(r.density) << ','
            << cell(r.clause) << '\n';
    }
}

std::variant<DiscreteStrategy, ContinuousStrategy> read_strategy_csv(std::istream& in,
                                                                     double horizon) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty strategy CSV");
    std::vector<double> t;
    std::vector<std::optional<double>> impulse, density;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cellstr;
        std::vector<std::optional<double>> cells;
        while (std::getline(ss, cellstr, ',')) {
            if (cellstr.empty()) {
                cells.push_back(std::nullopt);
            } else {
                cells.push_back(std::stod(cellstr));
            }
        }
        while (cells.size() < 3) cells.push_back(std::nullopt);
        if (!cells[0]) throw ConfigError("strategy CSV row without a time");
        t.push_back(*cells[0]);
        impulse.push_back(cells[1]);
        density.push_back(cells[2]);
    }
    if (t.empty()) throw ConfigError("strategy CSV has no rows");
    const bool has_density = std::any_of(density.begin(), density.end(),
                                         [](const auto& v) { return v.has_value(); });
    if (!has_density) {
        DiscreteStrategy d;
        d.grid.times = t;
        for (const auto& v : impulse) d.trades.push_back(v.value_or(0.0));
        d.target = -d.net_shares();
        return d;
    }
    ContinuousStrategy c;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (impulse[k] && *impulse[k] != 0.0) c.impulses.push_back({t[k], *impulse[k]});
        if (density[k]) {
            c.sample_t.push_back(t[k]);
            c.density.push_back(*density[k]);
        }
    }
    c.target = -c.net_shares();
    c.validate(horizon);
    return c;
}

}  // namespace lobexec
