#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lobexec/errors.hpp"
#include "lobexec/general_solver.hpp"
#include "lobexec/numerics.hpp"
#include "lobexec/oracle.hpp"

using namespace lobexec;

namespace {

const double kPi = 3.14159265358979323846;

MarketParams figure_params(double rho = 1.0) {
    return MarketParams{TimeFunction::sinusoid(4.0, 1.0, 2.0 * kPi),
                        TimeFunction::constant(rho), 1.0};
}

MarketParams constant_params(double lambda, double rho, double T = 1.0) {
    return MarketParams{TimeFunction::constant(lambda), TimeFunction::constant(rho), T};
}

Shape bumpy_table() {
    std::vector<double> x, f;
    for (int k = -30; k <= 30; ++k) {
        const double u = 0.25 * k;
        x.push_back(u);
        f.push_back(1.0 + std::exp(-u * u));
    }
    return Shape::tabulated(x, f);
}

}  // namespace

TEST_CASE("h vanishes at zero for every kind") {
    auto shape = Shape::power_law(1.0);
    CHECK(HFunction::v_discrete(0.5, 0.6, shape).eval(0.0) == 0.0);
    CHECK(HFunction::v_continuous(1.0, 0.2, shape).eval(0.0) == 0.0);
    CHECK(HFunction::p_discrete(0.5, 0.6, shape).eval(0.0) == 0.0);
    CHECK(HFunction::p_continuous(1.0, 0.2, shape).eval(0.0) == 0.0);
}

TEST_CASE("continuous-V h on the block shape is x*(2 rho + eta)/rho") {
    auto block = Shape::block();
    auto h = HFunction::v_continuous(1.0, 0.5, block);
    for (double x : {-2.0, -0.5, 1.0, 3.0}) {
        CHECK(h.eval(x) == doctest::Approx(x * 2.5).epsilon(1e-14));
    }
    CHECK(HFunction::v_continuous(1.0, 0.0, block).invert(3.0) ==
          doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("continuous-V h closed form for the square-root book") {
    auto shape = Shape::power_law(1.0);
    auto h = HFunction::v_continuous(1.0, 0.0, shape);
    for (double x : {0.5, 2.0}) {
        CHECK(h.eval(x) == doctest::Approx(std::sqrt(2.0 * x) * 1.5).epsilon(1e-14));
        CHECK(h.eval(-x) == doctest::Approx(-std::sqrt(2.0 * x) * 1.5).epsilon(1e-14));
        CHECK(h.invert(h.eval(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("gamma=0 reduces the power-law inverse to the block formula") {
    auto h0 = HFunction::v_continuous(1.3, 0.4, Shape::power_law(0.0));
    auto hb = HFunction::v_continuous(1.3, 0.4, Shape::block());
    for (double v : {-1.0, 0.3, 2.0}) {
        CHECK(h0.invert(v) == doctest::Approx(hb.invert(v)).epsilon(1e-13));
        CHECK(hb.invert(v) == doctest::Approx(v * 1.3 / (2.0 * 1.3 + 0.4)).epsilon(1e-13));
    }
}

TEST_CASE("generic inversion matches closed forms on the discrete-V kind") {
    auto tab = bumpy_table();
    auto h = HFunction::v_discrete(0.7, 0.8, tab);
    for (double v : {-2.0, -0.4, 0.9, 3.0}) {
        const double x = h.invert(v);
        CHECK(h.eval(x) == doctest::Approx(v).epsilon(1e-10));
    }
}

TEST_CASE("discrete-P h is well-defined and above |x| under the assumptions") {
    Rng rng(41);
    for (const auto& shape : {Shape::block(), Shape::power_law(0.5), Shape::power_law(1.0)}) {
        for (int trial = 0; trial < 300; ++trial) {
            const double a = rng.uniform(0.2, 0.95);
            const double a_hat = rng.uniform(0.2, 0.95);  // a_hat < 1: rho - eta > 0
            auto h = HFunction::p_discrete(a, a_hat, shape);
            const double x = rng.uniform(-4.0, 4.0);
            if (x == 0.0) continue;
            const double v = h.eval(x);
            CHECK((x > 0 ? v : -v) >= std::abs(x) - 1e-12);
        }
    }
}

TEST_CASE("discrete-V h sign lower bound (Lemma 3.2 style)") {
    Rng rng(42);
    for (const auto& shape : {Shape::block(), Shape::power_law(-0.3), bumpy_table()}) {
        for (int trial = 0; trial < 300; ++trial) {
            const double a = rng.uniform(0.1, 0.95);
            const double at = rng.uniform(0.1, 1.0);  // a_tilde <= 1 under rho+eta >= 0
            auto h = HFunction::v_discrete(a, at, shape);
            const double x = rng.uniform(-4.0, 4.0);
            if (x == 0.0) continue;
            const double s = x > 0 ? 1.0 : -1.0;
            const double bound = (1.0 - a * at) / (1.0 - a) * s * shape.F_inv(x);
            CHECK(s * h.eval(x) >= bound - 1e-10 * (1.0 + std::abs(bound)));
        }
    }
}

TEST_CASE("sign-condition implication (Lemma 3.6 style)") {
    Rng rng(43);
    int checked = 0;
    while (checked < 10000) {
        const double a1 = rng.uniform(0.05, 0.999);
        const double a2 = rng.uniform(0.05, 0.999);
        const double b1 = rng.uniform(0.05, 1.0);  // a_tilde in (0, 1]
        const double b2 = rng.uniform(0.05, 1.0);
        if ((1.0 - b1) / (b1 * (1.0 - a1)) < (1.0 - b2) / (1.0 - a2)) continue;  // premise
        ++checked;
        const double lhs = (1.0 - b1) / (1.0 - a1 * b1);
        const double rhs = a2 * (1.0 - b2) / (1.0 - a2 * b2);
        CHECK(lhs >= rhs - 1e-12);
    }
}

TEST_CASE("x=0 yields nu=0 and the zero strategy") {
    auto p = figure_params();
    auto g = TimeGrid::regular(4, 1.0);
    for (Model m : {Model::V, Model::P}) {
        auto sol = solve_general_discrete(0.0, g, p, Shape::power_law(1.0), m);
        CHECK(sol.nu == 0.0);
        for (double xi : std::get<DiscreteStrategy>(sol.strategy).trades) CHECK(xi == 0.0);
        auto cont = solve_general_continuous(0.0, p, Shape::power_law(1.0), m, 101);
        CHECK(cont.nu == 0.0);
        CHECK(std::get<ContinuousStrategy>(cont.strategy).xi0() == 0.0);
    }
}

TEST_CASE("block shape through the general solver equals the block solver") {
    Rng rng(44);
    auto block = Shape::block();
    for (int trial = 0; trial < 8; ++trial) {
        auto p = figure_params(rng.uniform(0.9, 1.6));
        const int n = rng.uniform_int(1, 7);
        auto g = TimeGrid::regular(n, 1.0);
        const double x = rng.uniform(-20.0, 20.0);
        for (Model m : {Model::V, Model::P}) {
            auto gen = solve_general_discrete(x, g, p, block, m);
            auto cls = solve_block_discrete(x, g, p, m);
            const auto& xg = std::get<DiscreteStrategy>(gen.strategy).trades;
            const auto& xc = std::get<DiscreteStrategy>(cls.strategy).trades;
            for (std::size_t i = 0; i < xg.size(); ++i) {
                CHECK(xg[i] == doctest::Approx(xc[i]).epsilon(1e-9));
            }
            CHECK(gen.cost == doctest::Approx(cls.cost).epsilon(1e-9));
        }
    }
}

TEST_CASE("general continuous on the block shape equals the block continuous solver") {
    auto p = figure_params();
    auto block = Shape::block();
    const double x = -50.0;
    for (Model m : {Model::V, Model::P}) {
        auto gen = solve_general_continuous(x, p, block, m, 501);
        auto cls = solve_block_continuous(x, p, m, 501);
        const auto& cg = std::get<ContinuousStrategy>(gen.strategy);
        const auto& cc = std::get<ContinuousStrategy>(cls.strategy);
        CHECK(cg.xi0() == doctest::Approx(cc.xi0()).epsilon(1e-8));
        CHECK(cg.xiT() == doctest::Approx(cc.xiT()).epsilon(1e-8));
        for (std::size_t k = 0; k < cg.density.size(); ++k) {
            CHECK(cg.density[k] == doctest::Approx(cc.density[k]).epsilon(1e-7));
        }
        CHECK(gen.cost == doctest::Approx(cls.cost).epsilon(1e-8));
    }
}

TEST_CASE("gamma=0 continuous solution reduces to the block one") {
    auto p = figure_params();
    auto gen0 = solve_general_continuous(-10.0, p, Shape::power_law(0.0), Model::V, 301);
    auto genb = solve_general_continuous(-10.0, p, Shape::block(), Model::V, 301);
    const auto& c0 = std::get<ContinuousStrategy>(gen0.strategy);
    const auto& cb = std::get<ContinuousStrategy>(genb.strategy);
    CHECK(c0.xi0() == doctest::Approx(cb.xi0()).epsilon(1e-10));
    CHECK(c0.xiT() == doctest::Approx(cb.xiT()).epsilon(1e-10));
    for (std::size_t k = 0; k < c0.density.size(); ++k) {
        CHECK(c0.density[k] == doctest::Approx(cb.density[k]).epsilon(1e-9));
    }
}

TEST_CASE("discrete power-law V matches the descent oracle") {
    auto p = figure_params();
    auto shape = Shape::power_law(1.0);
    auto g = TimeGrid::regular(5, 1.0);
    auto sol = solve_general_discrete(-10.0, g, p, shape, Model::V);
    auto orc = oracle_general(-10.0, g, p, shape, Model::V);
    CHECK(orc.converged);
    CHECK(std::abs(sol.cost - orc.cost) <= 1e-6 * (1.0 + std::abs(sol.cost)));
    const auto& xs = std::get<DiscreteStrategy>(sol.strategy).trades;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(xs[i] == doctest::Approx(orc.trades[i]).epsilon(1e-5));
    }
    // The trades sum to -x and the first/last share the sign of -x.
    CHECK(xs.front() > 0.0);
    CHECK(xs.back() > 0.0);
}

TEST_CASE("power-law P equals V with the effective resilience when depth is constant") {
    const double gamma = 1.0;
    auto shape = Shape::power_law(gamma);
    MarketParams p{TimeFunction::constant(3.0), TimeFunction::constant(1.0), 1.0};
    MarketParams p_eff{TimeFunction::constant(3.0), TimeFunction::constant(1.0 + gamma), 1.0};
    auto g = TimeGrid::regular(5, 1.0);
    auto solP = solve_general_discrete(-10.0, g, p, shape, Model::P);
    auto solV = solve_general_discrete(-10.0, g, p_eff, shape, Model::V);
    const auto& xp = std::get<DiscreteStrategy>(solP.strategy).trades;
    const auto& xv = std::get<DiscreteStrategy>(solV.strategy).trades;
    for (std::size_t i = 0; i < xp.size(); ++i) {
        CHECK(xp[i] == doctest::Approx(xv[i]).epsilon(1e-9));
    }
    // Continuous counterpart, rho_tilde = 2 rho for gamma = 1.
    auto cP = solve_general_continuous(-10.0, p, shape, Model::P, 201);
    auto cV = solve_general_continuous(-10.0, p_eff, shape, Model::V, 201);
    const auto& sp = std::get<ContinuousStrategy>(cP.strategy);
    const auto& sv = std::get<ContinuousStrategy>(cV.strategy);
    CHECK(sp.xi0() == doctest::Approx(sv.xi0()).epsilon(1e-8));
    CHECK(sp.xiT() == doctest::Approx(sv.xiT()).epsilon(1e-8));
    for (std::size_t k = 0; k < sp.density.size(); ++k) {
        CHECK(sp.density[k] == doctest::Approx(sv.density[k]).epsilon(1e-7));
    }
}

TEST_CASE("continuous power-law V equals the K_t closed form") {
    auto p = figure_params();
    const double gamma = 1.0;
    const double x = -50.0;
    auto sol = solve_general_continuous(x, p, Shape::power_law(gamma), Model::V, 401);
    auto K = [&](double t) {
        const double r = p.rho_at(t);
        const double e = p.eta(t);
        return std::pow(r * (1.0 + gamma) / (r * (2.0 + gamma) + e), 1.0 + gamma);
    };
    const double denom =
        integrate([&](double s) { return p.lambda_at(s) * p.rho_at(s) * K(s); }, 0.0, 1.0) +
        p.lambda_at(1.0);
    const double factor = -x / denom;
    const auto& c = std::get<ContinuousStrategy>(sol.strategy);
    CHECK(c.xi0() == doctest::Approx(factor * p.lambda_at(0.0) * K(0.0)).epsilon(1e-8));
    CHECK(c.xiT() ==
          doctest::Approx(factor * p.lambda_at(1.0) * (1.0 - K(1.0))).epsilon(1e-8));
    const double h = 1e-6;
    for (std::size_t k = 0; k < c.sample_t.size(); k += 40) {
        const double t = std::min(std::max(c.sample_t[k], h), 1.0 - h);
        const double dK = (K(t + h) - K(t - h)) / (2.0 * h);
        const double want =
            factor * p.lambda_at(t) * (dK + (p.rho_at(t) + p.eta(t)) * K(t));
        CHECK(c.density[k] == doctest::Approx(want).epsilon(1e-6));
    }
    // Fine discrete solve converges to it.
    const int n = 2000;
    auto disc = solve_general_discrete(x, TimeGrid::regular(n, 1.0), p,
                                       Shape::power_law(gamma), Model::V);
    const auto& xd = std::get<DiscreteStrategy>(disc.strategy).trades;
    const double dt = 1.0 / n;
    double sup = 0.0;
    for (double d : c.density) sup = std::max(sup, std::abs(d));
    for (int i = 1; i < n; i += 13) {
        const double t = static_cast<double>(i) / n;
        const double dK = (K(t + h) - K(t - h)) / (2.0 * h);
        const double want = factor * p.lambda_at(t) * (dK + (p.rho_at(t) + p.eta(t)) * K(t));
        CHECK(std::abs(xd[i] / dt - want) <= 1e-2 * sup);
    }
}

TEST_CASE("tabulated shape solves and matches the descent oracle (model V)") {
    auto p = constant_params(2.0, 1.0);
    auto tab = bumpy_table();
    auto g = TimeGrid::regular(4, 1.0);
    auto sol = solve_general_discrete(-3.0, g, p, tab, Model::V);
    auto orc = oracle_general(-3.0, g, p, tab, Model::V);
    CHECK(orc.converged);
    CHECK(std::abs(sol.cost - orc.cost) <= 1e-6 * (1.0 + std::abs(sol.cost)));
}

TEST_CASE("assumption reports") {
    auto p = constant_params(2.0, 1.0);
    auto block = Shape::block();
    CHECK(assumption_check(block, p, AssumptionId::a2_1).pass);
    CHECK(assumption_check(block, p, AssumptionId::a2_2).pass);

    auto up = assumption_check(Shape::power_law(1.0), p, AssumptionId::a2_1);
    CHECK_FALSE(up.pass);
    REQUIRE(up.witness_x.has_value());
    CHECK(*up.witness_x > 0.0);
    CHECK(assumption_check(Shape::power_law(1.0), p, AssumptionId::a2_2).pass);

    auto down = assumption_check(Shape::power_law(-0.5), p, AssumptionId::a2_2);
    CHECK_FALSE(down.pass);
    CHECK(assumption_check(Shape::power_law(-0.5), p, AssumptionId::a2_1).pass);

    auto t26 = assumption_check(Shape::power_law(1.0), p, AssumptionId::thm_2_6);
    CHECK(t26.pass);
    auto t29 = assumption_check(Shape::power_law(1.0), p, AssumptionId::thm_2_9);
    CHECK(t29.pass);
    CHECK(t29.case_id == 1);
}

TEST_CASE("assumption failure downgrades to a warning, solver still runs") {
    auto p = figure_params();
    auto sol = solve_general_discrete(-5.0, TimeGrid::regular(4, 1.0), p,
                                      Shape::power_law(1.0), Model::V);
    REQUIRE_FALSE(sol.warnings.empty());  // f increasing on R+ breaks A2.1
    CHECK(std::get<DiscreteStrategy>(sol.strategy).net_shares() ==
          doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("power-law condition clauses") {
    auto flat = constant_params(4.0, 1.0);
    for (Model m : {Model::V, Model::P}) {
        auto rep = powerlaw_conditions(flat, 0.7, m);
        CHECK(rep.pms.holds);
        CHECK(rep.ttpm_level.holds);
        CHECK(rep.ttpm_derivative.holds);
    }
    // Figure-2 right panel: gamma = 1, PMS holds (3 + eta >= 3 - 1.63 > 0).
    auto fig = figure_params();
    auto rep = powerlaw_conditions(fig, 1.0, Model::V);
    CHECK(rep.pms.holds);
    // gamma = -0.3 keeps the PMS clause positive as well.
    auto rep2 = powerlaw_conditions(fig, -0.3, Model::V);
    CHECK(rep2.pms.holds);
    // TTPM level clause fails for the Figure parameters (rho + eta < 0 somewhere).
    CHECK_FALSE(rep.ttpm_level.holds);
}

TEST_CASE("continuous-P case (ii): decreasing bijection, validated against the oracle") {
    // eta stays inside (rho(1+g), rho(2+g)) so condition (ii) holds throughout.
    MarketParams p{TimeFunction::piecewise_linear({{0.0, 1.0}, {0.1, 1.2}}),
                   TimeFunction::constant(1.0), 0.1};
    auto shape = Shape::power_law(0.5);
    auto chk = assumption_check(shape, p, AssumptionId::thm_2_9);
    REQUIRE(chk.pass);
    REQUIRE(chk.case_id == 2);
    auto sol = solve_general_continuous(-2.0, p, shape, Model::P, 401);
    CHECK(sol.case_two);
    const auto& c = std::get<ContinuousStrategy>(sol.strategy);
    CHECK(c.net_shares() == doctest::Approx(2.0).epsilon(1e-6));
    // Discrete strategies form a subset: the N=10 oracle cannot do better,
    // and its optimum approaches the continuous cost from above.
    auto orc = oracle_general(-2.0, TimeGrid::regular(10, 0.1), p, shape, Model::P);
    CHECK(orc.converged);
    CHECK(orc.cost >= sol.cost - 1e-9);
    CHECK(orc.cost - sol.cost <= 0.02 * std::abs(sol.cost));
}

TEST_CASE("cost nonnegativity for random admissible strategies under the assumptions") {
    Rng rng(45);
    auto p = constant_params(3.0, 1.2);
    for (const auto& [shape, model] :
         std::vector<std::pair<Shape, Model>>{{Shape::power_law(-0.3), Model::V},
                                              {Shape::power_law(1.0), Model::P},
                                              {Shape::block(), Model::V}}) {
        for (int trial = 0; trial < 200; ++trial) {
            DiscreteStrategy s{TimeGrid::regular(5, 1.0), {}, 0.0};
            for (int i = 0; i <= 5; ++i) s.trades.push_back(rng.uniform(-2.0, 2.0));
            s.target = -s.net_shares();
            CHECK(discrete_cost(s, model, p, shape).cost >= -1e-12);
        }
    }
}
