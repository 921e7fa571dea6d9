#include "liqtox/verification.hpp"

#include "liqtox/toxicity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace liqtox {

Market market_for_lambda(double lambda, double c, double price) {
    if (lambda == 1.0) {
        return cpamm_pool_for_depth_ratio(1e12, c, price);
    }
    return cpamm_pool_for_lambda(lambda, c, price);
}

namespace {

constexpr double kPrice = 1.0;

PenaltyFactor perturbed(PenaltyFactor lambda, double rel) {
    return PenaltyFactor(lambda.value() * (1.0 + rel));
}

PropertyResult frontier_constant(const VerifySpec& spec) {
    double worst = 0.0;
    std::string where;
    const double c = spec.collateral_units * kPrice;
    for (double lam : spec.lambdas) {
        const auto market = market_for_lambda(lam, c, kPrice);
        const auto lambda = perturbed(market_penalty_factor(market, c), spec.perturb_lambda);
        for (double i : spec.bonuses) {
            const RiskParams params(0.5, i);
            const auto est = locate_frontier_empirical(params, IncentivePolicy::constant(i), market,
                                                       spec.collateral_units, spec.eta, spec.tol);
            const double err = std::abs(est.ltv_star_empirical - frontier_constant_bonus(i, lambda));
            if (err > worst) {
                worst = err;
                where = "lambda=" + std::to_string(lam) + " i=" + std::to_string(i);
            }
        }
    }
    return {"frontier_constant_bonus", worst <= spec.frontier_tol, worst, spec.frontier_tol,
            "max |empirical - 1/((1+i)lambda)| at " + where};
}

PropertyResult frontier_dynamic(const VerifySpec& spec) {
    double worst = 0.0;
    std::size_t cells = 0;
    std::string where;
    const double c = spec.collateral_units * kPrice;
    for (double lam : spec.lambdas) {
        const auto market = market_for_lambda(lam, c, kPrice);
        const auto lambda = perturbed(market_penalty_factor(market, c), spec.perturb_lambda);
        for (double v : spec.lltvs) {
            // Beyond v lambda = 1 the dynamic frontier sits on the healthy side.
            if (v * lam > 1.0 + 1e-12) continue;
            for (double i : spec.bonuses) {
                const RiskParams params(v, i);
                const auto est =
                    locate_frontier_empirical(params, IncentivePolicy::health_linked(i), market,
                                              spec.collateral_units, spec.eta, spec.tol);
                const double err =
                    std::abs(est.ltv_star_empirical - frontier_dynamic_bonus(i, v, lambda));
                ++cells;
                if (err > worst) {
                    worst = err;
                    where = "lambda=" + std::to_string(lam) + " v=" + std::to_string(v) +
                            " i=" + std::to_string(i);
                }
            }
        }
    }
    return {"frontier_dynamic_bonus", cells > 0 && worst <= spec.frontier_tol, worst,
            spec.frontier_tol,
            std::to_string(cells) + " cells, max error at " + (where.empty() ? "-" : where)};
}

PropertyResult boundary(const VerifySpec& spec) {
    std::vector<double> lltvs;
    for (int k = 50; k <= 99; ++k) lltvs.push_back(k / 100.0);
    const double c = spec.collateral_units * kPrice;

    std::size_t checked = 0, agreed = 0;
    for (double lam : spec.lambdas) {
        const auto market = market_for_lambda(lam, c, kPrice);
        const auto lambda = perturbed(market_penalty_factor(market, c), spec.perturb_lambda);
        const double safe_max = boundary_safe_lltv(lambda);
        for (const auto& row :
             boundary_audit(lltvs, spec.bonuses.back(), market, spec.collateral_units, spec.eta)) {
            if (std::abs(row.v - safe_max) < spec.boundary_band) continue;
            ++checked;
            agreed += (row.v <= safe_max) == row.safe_empirical;
        }
    }
    const double frac = checked ? static_cast<double>(agreed) / checked : 0.0;
    return {"boundary_audit", checked > 0 && agreed == checked, frac, 1.0,
            std::to_string(agreed) + "/" + std::to_string(checked) + " grid points agree"};
}

PropertyResult sign_agreement(const VerifySpec& spec) {
    std::mt19937_64 rng(spec.seed);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); };

    std::size_t agreed = 0, done = 0;
    while (done < spec.sign_samples) {
        const double depth = std::pow(10.0, uniform(0.0, 6.0));
        const double units = std::pow(10.0, uniform(1.0, 3.0));
        const double price = uniform(0.5, 2.0);
        const double l = uniform(0.1, 1.5);
        const double i = uniform(0.0, 0.2);
        const double v = uniform(0.3, 0.95);
        const auto policy = done % 2 == 0 ? IncentivePolicy::constant(i)
                                          : IncentivePolicy::health_linked(i);
        const RiskParams params(v, i);
        const double c = units * price;
        const Market market = cpamm_pool_for_depth_ratio(depth, c, price);
        const auto lambda = perturbed(market_penalty_factor(market, c), spec.perturb_lambda);
        const double frontier = effective_frontier(policy, params, lambda);
        if (std::abs(l - frontier) <= spec.sign_band) continue;

        const auto p = position_at_ltv(market, units, l);
        const bool toxic_fd = finite_difference_dh(p, params, policy, market, spec.eta * p.q) < 0.0;
        agreed += toxic_fd == (l > frontier);
        ++done;
    }
    const double frac = static_cast<double>(agreed) / static_cast<double>(done);
    return {"oracle_sign_agreement", agreed == done, frac, 1.0,
            std::to_string(agreed) + "/" + std::to_string(done) + " states agree"};
}

PropertyResult convergence(const VerifySpec& spec) {
    const double c = spec.collateral_units * kPrice;
    const auto market = market_for_lambda(1.2, c, kPrice);
    const auto p = position_at_ltv(market, spec.collateral_units, 0.7);
    const RiskParams params(0.8, 0.05);
    const double etas[] = {1e-2, 1e-3, 1e-4, 1e-5};
    const auto table = convergence_study(p, params, IncentivePolicy::constant(0.05), market, etas);

    double lo = 1e300, hi = 0.0;
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
        lo = std::min(lo, table.rows[k].ratio);
        hi = std::max(hi, table.rows[k].ratio);
    }
    const bool ok = lo >= 8.0 && hi <= 12.0;
    return {"convergence_order", ok, table.fitted_order, 1.0,
            "error ratios in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                "], required [8, 12]"};
}

PropertyResult swap_exactness(const VerifySpec& spec) {
    std::mt19937_64 rng(spec.seed ^ 0x5eed5eedULL);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); };
    double worst_invariant = 0.0;
    std::size_t linear_violations = 0;
    for (std::size_t n = 0; n < spec.swap_samples; ++n) {
        const double x = std::pow(10.0, uniform(0.0, 9.0));
        const double y = std::pow(10.0, uniform(0.0, 9.0));
        const CpAmmPool pool(x, y);
        const double ds = x * uniform(0.0, 10.0);
        const auto sale = cpamm_sell_collateral(pool, ds);
        const double inv = std::abs(sale.pool.x() * sale.pool.y() - pool.k()) / pool.k();
        worst_invariant = std::max(worst_invariant, inv);

        // ds/x log-uniform in [1e-6, 0.1] keeps rounding far below 2 (ds/x)^2.
        const double small = x * std::pow(10.0, uniform(-6.0, -1.0));
        const auto s2 = cpamm_sell_collateral(pool, small);
        const double exact = std::log(cpamm_spot_price(s2.pool) / cpamm_spot_price(pool));
        const double lin = cpamm_log_price_impact_linearized(pool, small);
        const double u = small / x;
        if (std::abs(exact - lin) > 2.0 * u * u) ++linear_violations;
    }
    return {"swap_exactness", worst_invariant <= 1e-12 && linear_violations == 0, worst_invariant,
            1e-12, std::to_string(linear_violations) + " linearization bound violations"};
}

}  // namespace

std::vector<PropertyResult> run_verification(const VerifySpec& spec) {
    if (spec.lambdas.empty() || spec.bonuses.empty() || spec.lltvs.empty()) {
        throw std::invalid_argument("verify grid is empty: lambdas, bonuses and lltvs need values");
    }
    if (spec.sign_samples == 0 || spec.swap_samples == 0) {
        throw std::invalid_argument("verify sample counts must be >= 1");
    }
    return {
        frontier_constant(spec), frontier_dynamic(spec), boundary(spec),
        sign_agreement(spec),    convergence(spec),      swap_exactness(spec),
    };
}

}  // namespace liqtox
