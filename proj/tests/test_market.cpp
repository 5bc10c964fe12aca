#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lobexec/errors.hpp"
#include "lobexec/market.hpp"
#include "lobexec/numerics.hpp"

using namespace lobexec;

namespace {
const double kPi = 3.14159265358979323846;

MarketParams figure_params(double rho = 1.0) {
    return MarketParams{TimeFunction::sinusoid(4.0, 1.0, 2.0 * kPi),
                        TimeFunction::constant(rho), 1.0};
}
}  // namespace

TEST_CASE("eta of a constant depth is zero") {
    MarketParams p{TimeFunction::constant(4.0), TimeFunction::constant(1.0), 1.0};
    CHECK(eval_eta(p, 0.0) == 0.0);
    CHECK(eval_eta(p, 0.73) == 0.0);
}

TEST_CASE("eta of the sinusoidal depth at t=0.25") {
    // lambda(t) = 4 + cos(2 pi t): lambda(0.25) = 4, lambda'(0.25) = -2 pi.
    auto p = figure_params();
    CHECK(eval_eta(p, 0.25) == doctest::Approx(-kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("eta of a piecewise-linear depth") {
    MarketParams p{TimeFunction::piecewise_linear({{0.0, 1.0}, {1.0, 2.0}}),
                   TimeFunction::constant(1.0), 1.0};
    CHECK(eval_eta(p, 0.5) == doctest::Approx(1.0 / 1.5).epsilon(1e-8));
}

TEST_CASE("eta rejects a non-positive depth") {
    MarketParams p{TimeFunction::constant(-1.0), TimeFunction::constant(1.0), 1.0};
    CHECK_THROWS_AS(eval_eta(p, 0.5), NonPositiveDepth);
    CHECK_THROWS_AS(p.validate(), NonPositiveDepth);
}

TEST_CASE("quadrature: constants and a full cosine period") {
    CHECK(integrate([](double) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate([](double t) { return std::cos(2.0 * kPi * t); }, 0.0, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quadrature rejects non-finite integrands") {
    CHECK_THROWS_AS(integrate([](double t) { return 1.0 / t; }, 0.0, 1.0), QuadratureFailure);
}

TEST_CASE("interval decay for rho=1 over a Figure-1 grid step") {
    MarketParams p{TimeFunction::constant(1.0), TimeFunction::constant(1.0), 1.0};
    auto g = TimeGrid::regular(20, 1.0);
    auto c = grid_coefficients(p, g);
    CHECK(c.rho_integral[0] == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(c.a[0] == doctest::Approx(std::exp(-0.05)).epsilon(1e-14));
}

TEST_CASE("grid coefficients: constant lambda collapses the three families") {
    MarketParams p{TimeFunction::constant(1.0), TimeFunction::constant(1.0), 1.0};
    auto c = grid_coefficients(p, TimeGrid::regular(2, 1.0));
    for (int i = 0; i < 2; ++i) {
        CHECK(c.a[i] == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
        CHECK(c.a_tilde[i] == c.a[i]);
        CHECK(c.a_hat[i] == c.a[i]);
    }
}

TEST_CASE("grid coefficients: depth ratio enters a_tilde and a_hat") {
    auto p = figure_params();
    TimeGrid g;
    g.times = {0.0, 0.5, 1.0};
    auto c = grid_coefficients(p, g);
    // lambda(0)=5, lambda(0.5)=3.
    CHECK(c.a_tilde[0] == doctest::Approx(std::exp(-0.5) * 5.0 / 3.0).epsilon(1e-12));
    CHECK(c.a_hat[0] == doctest::Approx(std::exp(-0.5) * 3.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("a_tilde * a_hat = a^2 and interval splitting is multiplicative") {
    auto p = figure_params(1.3);
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const double s = rng.uniform(0.05, 0.95);
        TimeGrid coarse;
        coarse.times = {0.0, 1.0};
        TimeGrid fine;
        fine.times = {0.0, s, 1.0};
        auto cc = grid_coefficients(p, coarse);
        auto cf = grid_coefficients(p, fine);
        CHECK(cc.a[0] == doctest::Approx(cf.a[0] * cf.a[1]).epsilon(1e-12));
        CHECK(cc.a_tilde[0] == doctest::Approx(cf.a_tilde[0] * cf.a_tilde[1]).epsilon(1e-12));
        CHECK(cc.a_hat[0] == doctest::Approx(cf.a_hat[0] * cf.a_hat[1]).epsilon(1e-12));
        for (int i = 0; i < 2; ++i) {
            CHECK(cf.a_tilde[i] * cf.a_hat[i] ==
                  doctest::Approx(cf.a[i] * cf.a[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("time grid validation") {
    TimeGrid shifted{{0.5, 1.0}};
    TimeGrid repeated{{0.0, 0.5, 0.5, 1.0}};
    TimeGrid short_end{{0.0, 0.5}};
    CHECK_THROWS_AS(shifted.validate(1.0), ConfigError);
    CHECK_THROWS_AS(repeated.validate(1.0), ConfigError);
    CHECK_THROWS_AS(short_end.validate(1.0), ConfigError);
    CHECK_NOTHROW(TimeGrid::regular(7, 2.5).validate(2.5));
}

TEST_CASE("piecewise-linear knots must increase") {
    CHECK_THROWS_AS(TimeFunction::piecewise_linear({{0.0, 1.0}, {0.0, 2.0}}), ConfigError);
}

TEST_CASE("reversed parameters evaluate mirrored") {
    auto p = figure_params();
    auto r = p.reversed();
    for (double t : {0.0, 0.2, 0.77, 1.0}) {
        CHECK(r.lambda_at(t) == doctest::Approx(p.lambda_at(1.0 - t)).epsilon(1e-14));
        CHECK(r.eta(t) == doctest::Approx(-p.eta(1.0 - t)).epsilon(1e-12));
    }
}
