#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "lobexec/block_solver.hpp"
#include "lobexec/cost_engine.hpp"
#include "lobexec/general_solver.hpp"
#include "lobexec/manipulation.hpp"
#include "lobexec/oracle.hpp"

namespace lobexec {

using json = nlohmann::json;

// Descriptors: {"kind":"constant","value":v} | {"kind":"sinusoid","base":b,
// "amplitude":A,"omega":w} | {"kind":"piecewise_linear","knots":[[t,v],...]}
json to_json(const TimeFunction& fn);
TimeFunction time_function_from_json(const json& j);

// {"kind":"block"} | {"kind":"power_law","gamma":g} |
// {"kind":"tabulated","x":[...],"f":[...]}
json to_json(const Shape& shape);
Shape shape_from_json(const json& j);

enum class Mode { discrete, continuous };

struct Scenario {
    MarketParams params;
    Shape shape;
    Model model = Model::V;
    Mode mode = Mode::discrete;
    double target = 0.0;
    std::optional<TimeGrid> grid;  // required for discrete mode
    std::optional<double> s0;
};

Scenario scenario_from_json(const json& j);

json to_json(const CostReport& report);
json to_json(const BlockSolution& sol);
json to_json(const GeneralSolution& sol);
json to_json(const ManipulationReport& report);
json to_json(const OracleResult& result);
json to_json(const PdReport& report);
json to_json(const ConditionReport& report);
json to_json(const SignConditionReport& report);
json to_json(const PowerlawConditionReport& report);
json to_json(const AssumptionReport& report);

std::string model_name(Model model);
Model model_from_name(const std::string& name);

// Strategy CSV, header "t,trade_impulse,trade_density,clause_value".
// Discrete strategies fill the impulse column at the grid times; continuous
// ones carry impulses at 0 and the horizon plus sampled densities. The clause
// column is only populated by the figure outputs.
void write_strategy_csv(std::ostream& out,
                        const std::variant<DiscreteStrategy, ContinuousStrategy>& strategy,
                        const std::vector<std::pair<double, double>>* clause_curve = nullptr);

std::variant<DiscreteStrategy, ContinuousStrategy> read_strategy_csv(std::istream& in,
                                                                     double horizon);

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

}  // namespace lobexec
