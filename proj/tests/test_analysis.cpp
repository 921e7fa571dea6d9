#include "liqtox/analysis.hpp"
#include "liqtox/errors.hpp"
#include "liqtox/toxicity.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace liqtox;
using doctest::Approx;

TEST_CASE("finite difference tracks the analytic derivative") {
    const Market deep = CpAmmPool(1e9, 1e9);
    const Position p{100, 50, 1.0};
    const RiskParams params(0.8, 0.0);
    const auto policy = IncentivePolicy::constant(0.0);
    const double fd = finite_difference_dh(p, params, policy, deep, 1e-6 * p.q);
    const double analytic = health_differential(100, 50, 0.8, 0.0, market_penalty_factor(deep, 100));
    CHECK(analytic == Approx(0.0159999968).epsilon(1e-12));
    // Long-double reference difference quotient for the same step.
    CHECK(fd == Approx(0.016000012800017512).epsilon(1e-8));
    CHECK(std::abs(fd - analytic) / analytic < 2e-6);

    CHECK_THROWS_AS(finite_difference_dh(p, params, policy, deep, 0.0), std::domain_error);
    CHECK_THROWS_AS(finite_difference_dh(p, params, policy, deep, 50.0), std::domain_error);
}

TEST_CASE("position_at_ltv") {
    const Market pool = CpAmmPool(500, 1000);  // price 2
    const auto p = position_at_ltv(pool, 10, 0.7);
    CHECK(p.mark_price == 2.0);
    CHECK(ltv(p) == Approx(0.7).epsilon(1e-15));
}

TEST_CASE("frontier locator: constant bonus, CP-AMM depths") {
    const RiskParams params(0.5, 0.05);
    const auto policy = IncentivePolicy::constant(0.05);
    for (double ratio : {4.0, 10.0, 40.0}) {
        const Market m = cpamm_pool_for_depth_ratio(ratio, 100, 1.0);
        const auto est = locate_frontier_empirical(params, policy, m, 100, kDefaultEta, 1e-10);
        const double expected = 1.0 / (1.05 * (1 + 2 / ratio));
        CHECK(est.ltv_star_analytic == Approx(expected).epsilon(1e-14));
        CHECK(est.abs_error < 1e-6);
        CHECK(est.bracket_lo <= est.bracket_hi);
        CHECK(est.bracket_hi - est.bracket_lo <= 1e-10);
    }
}

TEST_CASE("frontier locator: health-linked at v lambda = 1") {
    const RiskParams params(0.8, 0.1);
    const auto policy = IncentivePolicy::health_linked(0.1);
    const Market m = cpamm_pool_for_lambda(1.25, 100, 1.0);
    const auto est = locate_frontier_empirical(params, policy, m, 100, kDefaultEta, 1e-10);
    CHECK(est.ltv_star_analytic == Approx(0.8).epsilon(1e-13));
    CHECK(est.abs_error < 1e-6);
}

TEST_CASE("frontier locator: linear model") {
    const RiskParams params(0.6, 0.05);
    const Market m = linear_market_for_lambda(1.2, 100, 1.0);
    const auto est =
        locate_frontier_empirical(params, IncentivePolicy::constant(0.05), m, 100, kDefaultEta, 1e-10);
    CHECK(est.ltv_star_analytic == Approx(1.0 / 1.26).epsilon(1e-13));
    CHECK(est.abs_error < 1e-6);
}

TEST_CASE("frontier error shrinks linearly with eta") {
    const RiskParams params(0.5, 0.05);
    const auto policy = IncentivePolicy::constant(0.05);
    const Market m = cpamm_pool_for_depth_ratio(10.0, 100, 1.0);
    const auto a = locate_frontier_empirical(params, policy, m, 100, 1e-4, 1e-13);
    const auto b = locate_frontier_empirical(params, policy, m, 100, 1e-5, 1e-13);
    const double ratio = a.abs_error / b.abs_error;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 12.0);
}

TEST_CASE("frontier locator rejects a bracket without a sign change") {
    const RiskParams params(0.5, 0.05);
    const Market m = cpamm_pool_for_depth_ratio(10.0, 100, 1.0);
    try {
        locate_frontier_empirical(params, IncentivePolicy::constant(0.05), m, 100, kDefaultEta, 1e-9,
                                  FrontierBracket{0.9, 3.0});
        FAIL("expected NoFrontierInRange");
    } catch (const ConditionError& e) {
        CHECK(e.code() == Condition::NoFrontierInRange);
    }
}

TEST_CASE("boundary audit") {
    const Market m = cpamm_pool_for_lambda(1.25, 100, 1.0);
    const std::array<double, 4> lltvs{0.7, 0.79, 0.81, 0.9};
    const auto rows = boundary_audit(lltvs, 0.1, m, 100);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.lambda == Approx(1.25).epsilon(1e-14));
        CHECK(r.safe_analytic == (r.v <= 0.8));
        CHECK(r.safe_empirical == r.safe_analytic);
    }
}

TEST_CASE("convergence study") {
    const Market m = cpamm_pool_for_lambda(1.2, 100, 1.0);
    const Position p = position_at_ltv(m, 100, 0.7);
    const RiskParams params(0.6, 0.05);
    const std::array<double, 4> etas{1e-2, 1e-3, 1e-4, 1e-5};
    const auto table = convergence_study(p, params, IncentivePolicy::constant(0.05), m, etas);
    REQUIRE(table.rows.size() == 4);
    CHECK(std::isnan(table.rows[0].ratio));
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        CHECK(table.rows[k].ratio >= 8.0);
        CHECK(table.rows[k].ratio <= 12.0);
    }
    CHECK(table.fitted_order == Approx(1.0).epsilon(0.05));
    const double analytic = table.rows[0].analytic;
    CHECK(std::abs(table.extrapolated_limit - analytic) / std::abs(analytic) < 1e-6);
}

TEST_CASE("extrapolated limit at eta = 1e-7") {
    const Market deep = CpAmmPool(1e9, 1e9);
    const Position p{100, 50, 1.0};
    const RiskParams params(0.8, 0.0);
    const std::array<double, 2> etas{1e-6, 1e-7};
    const auto table = convergence_study(p, params, IncentivePolicy::constant(0.0), deep, etas);
    const double analytic = table.rows[0].analytic;
    CHECK(std::abs(table.extrapolated_limit - analytic) / analytic <= 1e-8);
    // The raw difference quotient alone is only first-order accurate.
    CHECK(std::abs(table.rows[1].finite_difference - analytic) / analytic > 1e-8);
}

TEST_CASE("unit_uniform is reproducible and in range") {
    std::mt19937_64 a(42), b(42);
    for (int n = 0; n < 1000; ++n) {
        const double x = unit_uniform(a);
        REQUIRE(x == unit_uniform(b));
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
}
