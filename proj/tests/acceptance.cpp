// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Grids and samples here are chosen independently of the
// `verify` subcommand's property suites.
#include "liqtox/analysis.hpp"
#include "liqtox/commands.hpp"
#include "liqtox/engine.hpp"
#include "liqtox/sweep.hpp"
#include "liqtox/toxicity.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

using namespace liqtox;

namespace {

constexpr double kC = 100.0;  // collateral units, price 1 throughout

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// CP-AMM at price 1 with the given y/c.
Market pool_at_ratio(double ratio) { return CpAmmPool(ratio * kC, ratio * kC); }

double ltv_or_inf(const Position& p) {
    return p.collateral_value() > 0.0 ? p.q / p.collateral_value()
                                      : std::numeric_limits<double>::infinity();
}

Outcome infinite_liquidity() {
    const Market m = pool_at_ratio(1e12);
    double worst = 0.0;
    for (double i : {0.01, 0.05, 0.1}) {
        const auto est = locate_frontier_empirical(RiskParams(0.5, i), IncentivePolicy::constant(i),
                                                   m, kC, 1e-6, 1e-9);
        worst = std::max(worst, std::abs(est.ltv_star_empirical - 1.0 / (1.0 + i)));
    }
    return {worst <= 1e-6, fmt("max |l* - 1/(1+i)| = %.3g (limit 1e-6)", worst)};
}

Outcome finite_depth() {
    double worst = 0.0;
    for (double y : {400.0, 1000.0, 4000.0}) {
        const Market m = CpAmmPool(y, y);
        const double lambda = 1.0 + 2.0 * kC / y;
        for (double i : {0.0, 0.05, 0.1}) {
            const auto est = locate_frontier_empirical(
                RiskParams(0.5, i), IncentivePolicy::constant(i), m, kC, 1e-6, 1e-9);
            worst = std::max(worst, std::abs(est.ltv_star_empirical - 1.0 / ((1.0 + i) * lambda)));
        }
    }
    return {worst <= 1e-5, fmt("max |l* - 1/((1+i)lambda)| = %.3g over 9 cells (limit 1e-5)", worst)};
}

Outcome health_linked_frontier() {
    double worst = 0.0, boundary_case = NAN;
    for (double v : {0.6, 0.7, 0.8}) {
        for (double i : {0.02, 0.05, 0.1}) {
            for (double lambda : {1.05, 1.15, 1.25}) {
                const Market m = CpAmmPool(2.0 * kC / (lambda - 1.0), 2.0 * kC / (lambda - 1.0));
                const auto est = locate_frontier_empirical(
                    RiskParams(v, i), IncentivePolicy::health_linked(i), m, kC, 1e-6, 1e-9);
                const double expected = (1.0 + i * v * lambda) / ((1.0 + i) * lambda);
                const double err = std::abs(est.ltv_star_empirical - expected);
                worst = std::max(worst, err);
                if (v == 0.8 && i == 0.1 && lambda == 1.25) boundary_case = est.ltv_star_empirical;
            }
        }
    }
    const bool ok = worst <= 1e-5 && std::abs(boundary_case - 0.8) <= 1e-5;
    return {ok, fmt("max error %.3g over 27 cells; v=0.8,i=0.1,lambda=1.25 -> %.8f", worst,
                    boundary_case)};
}

Outcome boundary_audit_grid() {
    int checked = 0, agree = 0;
    for (double lambda : {1.0, 1.1, 1.25, 1.5}) {
        const Market m = pool_at_ratio(lambda == 1.0 ? 1e12 : 2.0 / (lambda - 1.0));
        for (int k = 50; k <= 99; ++k) {
            const double v = k / 100.0;
            if (std::abs(v - 1.0 / lambda) <= 0.005) continue;
            const Position p{kC, v * kC, 1.0};
            const double fd = finite_difference_dh(p, RiskParams(v, 0.1),
                                                   IncentivePolicy::health_linked(0.1), m, 1e-6 * p.q);
            ++checked;
            agree += (fd >= 0.0) == (v <= 1.0 / lambda);
        }
    }
    return {agree == checked, fmt("%d/%d grid points agree", agree, checked)};
}

Outcome oracle_sign_agreement() {
    std::mt19937_64 rng(0xACCE5);
    int checked = 0, agree = 0, skipped = 0;
    while (checked < 10'000) {
        const double ratio = std::pow(10.0, 6.0 * unit_uniform(rng));
        const double l = 0.1 + 1.4 * unit_uniform(rng);
        const double i = 0.2 * unit_uniform(rng);
        const double v = 0.3 + 0.65 * unit_uniform(rng);
        const bool linked = unit_uniform(rng) < 0.5;
        const auto policy = linked ? IncentivePolicy::health_linked(i) : IncentivePolicy::constant(i);
        const RiskParams params(v, i);
        const Market m = pool_at_ratio(ratio);
        const auto lambda = market_penalty_factor(m, kC);
        if (std::abs(l - effective_frontier(policy, params, lambda)) <= 1e-3 || l <= 0.1) {
            ++skipped;
            continue;
        }
        const Position p{kC, l * kC, 1.0};
        const double h = health(p, params);
        const double analytic = health_differential(kC, p.q, v, incentive(policy, h), lambda);
        const double fd = finite_difference_dh(p, params, policy, m, 1e-6 * p.q);
        ++checked;
        agree += (fd > 0.0) == (analytic > 0.0);
    }
    return {agree == checked,
            fmt("%d/%d states agree (%d drawn within 1e-3 of the frontier skipped)", agree, checked,
                skipped)};
}

Outcome convergence_order() {
    const Market m = CpAmmPool(400, 400);  // lambda = 1.5
    const Position p{kC, 80, 1.0};
    const std::array<double, 4> etas{1e-2, 1e-3, 1e-4, 1e-5};
    const auto table = convergence_study(p, RiskParams(0.7, 0.05), IncentivePolicy::constant(0.05),
                                         m, etas);
    bool ok = true;
    std::string ratios;
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        const double r = table.rows[k].ratio;
        ok = ok && r >= 8.0 && r <= 12.0;
        ratios += fmt("%s%.4f", k == 1 ? "" : ", ", r);
    }
    return {ok, "error ratios [" + ratios + "] (required in [8, 12])"};
}

// A finite step starting within O(step) of the frontier can land on the
// benign side even though the pre-state's tangent says toxic (on a CP-AMM the
// frontier rises as collateral leaves). Monotonicity is therefore required
// while the pre-state is toxic by more than kToxicBand, the same band used for
// sign agreement; steps inside the band are counted and reported.
constexpr double kToxicBand = 1e-3;

Outcome spiral_properties() {
    std::mt19937_64 rng(0x5B1A1);
    int toxic_ok = 0, benign_ok = 0;
    int toxic_steps_checked = 0, in_band_steps = 0, in_band_violations = 0;
    for (int n = 0; n < 100; ++n) {
        // Toxic: start above both v and the frontier in a shallow-ish pool.
        const double v = 0.6 + 0.3 * unit_uniform(rng);
        const double i = 0.15 * unit_uniform(rng);
        const bool linked = n % 2 == 1;
        const auto policy = linked ? IncentivePolicy::health_linked(i) : IncentivePolicy::constant(i);
        const RiskParams params(v, i);
        const Market m = pool_at_ratio(std::pow(10.0, 0.3 + 1.2 * unit_uniform(rng)));
        const auto lambda = market_penalty_factor(m, kC);
        const double l0 = std::max(v, effective_frontier(policy, params, lambda)) + 0.01 +
                          0.2 * unit_uniform(rng);
        const Position p0{kC, l0 * kC, 1.0};
        const auto t = run_spiral(p0, params, policy, m,
                                  StepRule::fixed_fraction(0.001 + 0.004 * unit_uniform(rng)));
        bool ok = !t.steps.empty();
        Position before = p0;
        for (const auto& st : t.steps) {
            if (before.collateral_value() <= 0.0) break;
            const auto verdict = classify(before, params, policy, st.lambda_before);
            if (!verdict.toxic) break;
            const bool monotone =
                st.h_after < st.h_before && ltv_or_inf(st.position_after) > ltv_or_inf(before);
            if (verdict.ltv - verdict.threshold_ltv > kToxicBand) {
                ++toxic_steps_checked;
                ok = ok && monotone;
            } else {
                ++in_band_steps;
                in_band_violations += !monotone;
            }
            before = st.position_after;
        }
        toxic_ok += ok;
    }
    for (int n = 0; n < 100; ++n) {
        // Benign: liquidatable but below the frontier; deep enough that the
        // frontier sits above v.
        const double v = 0.5 + 0.3 * unit_uniform(rng);
        const double i = 0.1 * unit_uniform(rng);
        const bool linked = n % 2 == 1;
        const auto policy = linked ? IncentivePolicy::health_linked(i) : IncentivePolicy::constant(i);
        const RiskParams params(v, i);
        const Market m = pool_at_ratio(std::pow(10.0, 2.0 + 3.0 * unit_uniform(rng)));
        const auto lambda = market_penalty_factor(m, kC);
        const double frontier = effective_frontier(policy, params, lambda);
        const double lo = v + 1e-4, hi = frontier - 0.01;
        if (hi <= lo) {
            std::fprintf(stderr, "benign scenario %d has no room below the frontier\n", n);
            continue;
        }
        const double l0 = lo + (hi - lo) * unit_uniform(rng);
        const auto t = run_spiral(Position{kC, l0 * kC, 1.0}, params, policy, m,
                                  StepRule::fixed_fraction(0.001 + 0.05 * unit_uniform(rng)));
        benign_ok += t.outcome == SpiralOutcome::Recovered || t.outcome == SpiralOutcome::FullyRepaid;
    }
    return {toxic_ok == 100 && benign_ok == 100,
            fmt("toxic monotone %d/100 (%d steps beyond band %.0e; %d/%d in-band steps non-monotone); "
                "benign terminated %d/100",
                toxic_ok, toxic_steps_checked, kToxicBand, in_band_violations, in_band_steps,
                benign_ok)};
}

Outcome swap_exactness() {
    std::mt19937_64 rng(0x5AA9);
    double worst_k = 0.0, worst_impact_ratio = 0.0;
    for (int n = 0; n < 10'000; ++n) {
        const CpAmmPool pool(std::pow(10.0, 8.0 * unit_uniform(rng)),
                             std::pow(10.0, 8.0 * unit_uniform(rng)));
        const double u = std::pow(10.0, -6.0 + 5.0 * unit_uniform(rng));  // ds/x in [1e-6, 0.1]
        const double ds = u * pool.x();
        const auto sale = cpamm_sell_collateral(pool, ds);
        worst_k = std::max(worst_k, std::abs(sale.pool.x() * sale.pool.y() - pool.k()) / pool.k());
        const double exact = std::log(cpamm_spot_price(sale.pool) / cpamm_spot_price(pool));
        const double gap = std::abs(exact - cpamm_log_price_impact_linearized(pool, ds));
        worst_impact_ratio = std::max(worst_impact_ratio, gap / (2.0 * u * u));
    }
    return {worst_k <= 1e-12 && worst_impact_ratio <= 1.0,
            fmt("max rel k drift %.3g (limit 1e-12); max gap/(2u^2) %.4f (limit 1)", worst_k,
                worst_impact_ratio)};
}

Outcome sweep_determinism() {
    GridSpec g;
    g.models = {ModelKind::CpAmm, ModelKind::Linear};
    g.lltvs = {0.65, 0.85};
    g.bonuses = {0.03, 0.08};
    g.depth_ratios = {5.0, 50.0};
    g.seed = 20261018;
    std::ostringstream a, b, info;
    const int rc_a = cmd_sweep(g, {}, a, info);
    const int rc_b = cmd_sweep(g, {}, b, info);
    const bool ok = rc_a == kExitSuccess && rc_b == kExitSuccess && a.str() == b.str();
    return {ok, fmt("two runs, %zu bytes each, identical=%s", a.str().size(),
                    a.str() == b.str() ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::array<std::pair<const char*, std::function<Outcome()>>, 9> criteria{{
        {"infinite-liquidity frontier recovers 1/(1+i)", infinite_liquidity},
        {"finite-depth constant-bonus frontier", finite_depth},
        {"health-linked frontier over 3x3x3 grid", health_linked_frontier},
        {"boundary-safe LLTV audit", boundary_audit_grid},
        {"finite-difference oracle sign agreement", oracle_sign_agreement},
        {"first-order convergence in eta", convergence_order},
        {"spiral monotonicity and benign termination", spiral_properties},
        {"swap exactness and linearized impact", swap_exactness},
        {"sweep determinism", sweep_determinism},
    }};

    int failures = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome r;
        try {
            r = criteria[k].second();
        } catch (const std::exception& e) {
            r = {false, std::string("threw: ") + e.what()};
        }
        failures += !r.passed;
        std::printf("%s criterion %zu: %s -- %s\n", r.passed ? "PASS" : "FAIL", k + 1,
                    criteria[k].first, r.detail.c_str());
        std::fflush(stdout);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/%zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failures,
                criteria.size(), secs);
    return failures == 0 ? 0 : 1;
}
