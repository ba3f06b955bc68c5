#include <doctest.h>

#include <cmath>
#include <random>

#include "kinmarket/errors.hpp"
#include "kinmarket/price.hpp"
#include "oracles.hpp"

using namespace kinmarket;

namespace {

const double kTest2Rate = std::log(0.8 / 0.3) / 50.0;
DemandCurve test2_curve() { return DemandCurve::exponential_decay(0.2, kTest2Rate); }

// mpmath, 40 digits: root of g(S') = 50 * 1.01 + 0.015 for the test-2 curve
constexpr double kTest2FuturePrice = 50.23590376138044553;
// mpmath, 40 digits: price ODE right-hand side for the test-2 curve at S = 50
constexpr double kTest2RhsAt50 = 0.23635660014906409;

} // namespace

TEST_CASE("g transform") {
    CHECK(g_transform(DemandCurve::constant(0.5), 50.0) == doctest::Approx(50.0));
    CHECK(g_transform(DemandCurve::constant(0.2), 10.0) == doctest::Approx(40.0));
    CHECK(g_transform(test2_curve(), 50.0) == doctest::Approx(50.0).epsilon(1e-13));
}

TEST_CASE("g transform is strictly increasing") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> price(1e-3, 2000.0);
    const DemandCurve curves[] = {DemandCurve::constant(0.3), test2_curve(),
                                  DemandCurve::exponential_decay(0.6, 0.5)};
    for (const auto& curve : curves) {
        for (int k = 0; k < 5000; ++k) {
            double s1 = price(gen);
            double s2 = price(gen);
            if (s1 == s2) continue;
            if (s1 > s2) std::swap(s1, s2);
            REQUIRE(g_transform(curve, s1) < g_transform(curve, s2));
        }
    }
}

TEST_CASE("future price, constant demand closed form") {
    const auto S1 = future_price(DemandCurve::constant(0.5), 50.0, 0.01, 0.015);
    CHECK(S1 == doctest::Approx(50.515).epsilon(1e-14));
}

TEST_CASE("future price with no interest and no dividend is the current price") {
    CHECK(future_price(DemandCurve::constant(0.5), 50.0, 0.0, 0.0) == 50.0);
    CHECK(future_price(test2_curve(), 50.0, 0.0, 0.0) == 50.0);
}

TEST_CASE("future price, exponential demand") {
    const auto curve = test2_curve();
    const double S1 = future_price(curve, 50.0, 0.01, 0.015);
    CHECK(S1 == doctest::Approx(kTest2FuturePrice).epsilon(1e-13));

    // independent dense scan of g
    const double target = g_transform(curve, 50.0) * 1.01 + 0.015;
    const double scanned = oracle::scan_root(
        [&](double s) {
            const double mu = 0.2 + 0.8 * std::exp(-kTest2Rate * s);
            return (1.0 - mu) * s / mu - target;
        },
        50.0, 51.0, 100000);
    CHECK(S1 == doctest::Approx(scanned).epsilon(1e-9));
}

TEST_CASE("future price round trip and ordering") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> price(1.0, 5000.0);
    std::uniform_real_distribution<double> rate(0.0, 0.05);
    std::uniform_real_distribution<double> div(0.0, 0.1);
    const DemandCurve curves[] = {DemandCurve::constant(0.5), test2_curve(), DemandCurve::exponential_decay(0.4, 0.01)};
    for (const auto& curve : curves) {
        for (int k = 0; k < 2000; ++k) {
            const double S = price(gen);
            const double r = rate(gen);
            const double D = k % 5 == 0 ? 0.0 : div(gen);
            const double next = future_price(curve, S, r, D);
            const double target = g_transform(curve, S) * (1.0 + r) + D;
            REQUIRE(std::abs(g_transform(curve, next) - target) < 1e-10 * target);
            if (r > 0.0 || D > 0.0) {
                REQUIRE(next > S);
            }
        }
    }
}

TEST_CASE("future price closed form for constant demand") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    std::uniform_real_distribution<double> price(1.0, 1000.0);
    for (int k = 0; k < 1000; ++k) {
        const double C = unit(gen);
        const double S = price(gen);
        const double expected = 1.02 * S + C / (1.0 - C) * 0.03;
        REQUIRE(future_price(DemandCurve::constant(C), S, 0.02, 0.03) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("future price reports a missing bracket") {
    RootFindConfig cfg;
    cfg.max_iter = 1;
    CHECK_THROWS_AS(future_price(DemandCurve::constant(0.5), 50.0, 10.0, 0.0, cfg), BracketFailure);
}

TEST_CASE("equilibrium price") {
    CHECK(equilibrium_price(DemandCurve::constant(0.5), 1000.0, 10.0) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(equilibrium_price(DemandCurve::constant(0.3), 777.0, 4.0) == doctest::Approx(0.3 * 777.0 / 4.0).epsilon(1e-14));
    CHECK(equilibrium_price(test2_curve(), 1000.0, 10.0) == doctest::Approx(50.0).epsilon(1e-13));
}

TEST_CASE("equilibrium price is a fixed point of the clearing relation") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> wealth(1.0, 1e6);
    const auto curve = test2_curve();
    for (int k = 0; k < 2000; ++k) {
        const double w = wealth(gen);
        const double S = equilibrium_price(curve, w, 10.0);
        REQUIRE(std::abs(S * 10.0 - curve.fraction(S) * w) < 1e-12 * w);
    }
}

TEST_CASE("average return") {
    CHECK(avg_return(50.0, 50.515, 0.015) == doctest::Approx(0.0106));
    CHECK(avg_return(50.0, 50.0, 0.0) == 0.0);
    // constant demand: excess return over bonds is D / (S (1 - C))
    const double C = 0.4;
    const double next = future_price(DemandCurve::constant(C), 80.0, 0.01, 0.02);
    CHECK(avg_return(80.0, next, 0.02) - 0.01 == doctest::Approx(0.02 / (80.0 * (1.0 - C))).epsilon(1e-10));
}

TEST_CASE("price ODE right-hand side") {
    CHECK(price_ode_rhs(DemandCurve::constant(0.5), 50.0, 0.01, 0.015) == doctest::Approx(0.515).epsilon(1e-13));
    CHECK(price_ode_rhs(DemandCurve::constant(0.5), 50.0, 0.0, 0.0) == 0.0);
    CHECK(price_ode_rhs(test2_curve(), 50.0, 0.0, 0.0) == 0.0);

    const double rhs = price_ode_rhs(test2_curve(), 50.0, 0.01, 0.015);
    CHECK(rhs == doctest::Approx(kTest2RhsAt50).epsilon(1e-12));
    CHECK(rhs < 0.515);
}

TEST_CASE("price ODE, constant demand matches the analytic solution") {
    // dS/dt = r S + C D / (1 - C)  =>  S(t) = (S0 + k) e^{rt} - k,  k = C D / ((1 - C) r)
    const auto path = integrate_price_ode(DemandCurve::constant(0.5), 50.0, 0.01, 0.015, 400.0, 0.1);
    REQUIRE(path.size() == 4001);
    CHECK(path.back().t == 400.0);
    CHECK(path.back().S == doctest::Approx(51.5 * std::exp(4.0) - 1.5).epsilon(1e-9));
    CHECK(path.back().S == doctest::Approx(2810.304726706928).epsilon(1e-9));
}

TEST_CASE("price ODE is flat without interest and dividends") {
    for (const auto& p : integrate_price_ode(test2_curve(), 50.0, 0.0, 0.0, 50.0, 0.5)) {
        REQUIRE(p.S == 50.0);
    }
}

TEST_CASE("price ODE converges under step halving") {
    const auto coarse = integrate_price_ode(test2_curve(), 50.0, 0.01, 0.015, 400.0, 0.2);
    const auto fine = integrate_price_ode(test2_curve(), 50.0, 0.01, 0.015, 400.0, 0.1);
    CHECK(std::abs(coarse.back().S / fine.back().S - 1.0) < 1e-6);
}

TEST_CASE("price ODE handles a final partial step") {
    const auto path = integrate_price_ode(DemandCurve::constant(0.5), 50.0, 0.01, 0.015, 1.05, 0.1);
    CHECK(path.back().t == 1.05);
    CHECK(path.back().S == doctest::Approx(51.5 * std::exp(0.0105) - 1.5).epsilon(1e-12));
}

TEST_CASE("exponential demand damps the price by roughly a factor five") {
    const auto flat = integrate_price_ode(DemandCurve::constant(0.5), 50.0, 0.01, 0.015, 400.0, 0.1);
    const auto decaying = integrate_price_ode(test2_curve(), 50.0, 0.01, 0.015, 400.0, 0.1);
    const double ratio = decaying.back().S / flat.back().S;
    CHECK(ratio >= 0.15);
    CHECK(ratio <= 0.25);
}

TEST_CASE("growth envelope") {
    const auto env = growth_envelope(DemandCurve::constant(0.5), 50.0, 1000.0, 0.01, 0.015, 0.0);
    CHECK(env.rate == doctest::Approx(0.0106));
    CHECK(env.wealth == 1000.0);
    CHECK(env.price == 50.0);
    const auto no_div = growth_envelope(test2_curve(), 50.0, 1000.0, 0.01, 0.0, 100.0);
    CHECK(no_div.rate == doctest::Approx(0.01));
    CHECK(no_div.wealth == doctest::Approx(1000.0 * std::exp(1.0)));
}

TEST_CASE("constant-demand price ODE stays inside the growth envelope") {
    const auto curve = DemandCurve::constant(0.5);
    for (const auto& p : integrate_price_ode(curve, 50.0, 0.01, 0.015, 400.0, 0.5)) {
        REQUIRE(p.S <= growth_envelope(curve, 50.0, 1000.0, 0.01, 0.015, p.t).price * (1.0 + 1e-12));
    }
}

TEST_CASE("constant-demand mean wealth closed form") {
    CHECK(constant_mu_wealth(0.5, 1000.0, 10.0, 0.015, 0.01, 400.0) == doctest::Approx(54614.229478154182).epsilon(1e-12));
    CHECK(constant_mu_wealth(0.5, 1000.0, 10.0, 0.015, 0.01, 0.0) == 1000.0);
    CHECK(constant_mu_wealth(0.5, 1000.0, 10.0, 0.0, 0.01, 250.0) == doctest::Approx(1000.0 * std::exp(2.5)));
}
