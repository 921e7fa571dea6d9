#include "liqtox/analysis.hpp"

#include "liqtox/errors.hpp"
#include "liqtox/toxicity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace liqtox {

double finite_difference_dh(const Position& position, const RiskParams& params,
                            const IncentivePolicy& policy, const Market& market, double da) {
    if (!(da < position.q)) {
        throw std::domain_error("finite_difference_dh needs da < q");
    }
    const auto step = probe_step(position, params, policy, market, da);
    return (step.h_after - step.h_before) / da;
}

Position position_at_ltv(const Market& market, double collateral_units, double ltv) {
    if (!(collateral_units > 0.0) || !(ltv > 0.0)) {
        throw std::invalid_argument("position_at_ltv needs positive collateral and LTV");
    }
    const double price = market_price(market);
    return Position{collateral_units, ltv * collateral_units * price, price};
}

namespace {

bool is_toxic_empirical(const RiskParams& params, const IncentivePolicy& policy,
                        const Market& market, double collateral_units, double ltv, double eta) {
    const auto p = position_at_ltv(market, collateral_units, ltv);
    return finite_difference_dh(p, params, policy, market, eta * p.q) < 0.0;
}

}  // namespace

FrontierEstimate locate_frontier_empirical(const RiskParams& params, const IncentivePolicy& policy,
                                           const Market& market, double collateral_units,
                                           double eta, double tol, FrontierBracket bracket) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("bisection tolerance must be > 0");
    }
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::invalid_argument("eta must lie in (0, 1)");
    }
    if (!(bracket.lo > 0.0 && bracket.lo < bracket.hi)) {
        throw std::invalid_argument("bracket must satisfy 0 < lo < hi");
    }

    double lo = bracket.lo;
    double hi = bracket.hi;
    const bool toxic_lo = is_toxic_empirical(params, policy, market, collateral_units, lo, eta);
    const bool toxic_hi = is_toxic_empirical(params, policy, market, collateral_units, hi, eta);
    if (toxic_lo || !toxic_hi) {
        throw ConditionError(Condition::NoFrontierInRange,
                             "no benign-to-toxic change in LTV bracket [" + std::to_string(lo) +
                                 ", " + std::to_string(hi) + "]");
    }

    int iterations = 0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;  // bracket at double resolution
        }
        if (is_toxic_empirical(params, policy, market, collateral_units, mid, eta)) {
            hi = mid;
        } else {
            lo = mid;
        }
        ++iterations;
    }

    const double c = collateral_units * market_price(market);
    const double analytic = effective_frontier(policy, params, market_penalty_factor(market, c));
    const double estimate = 0.5 * (lo + hi);
    return FrontierEstimate{
        .ltv_star_empirical = estimate,
        .ltv_star_analytic = analytic,
        .eta = eta,
        .abs_error = std::abs(estimate - analytic),
        .iterations = iterations,
        .bracket_lo = lo,
        .bracket_hi = hi,
    };
}

std::vector<BoundaryAuditRow> boundary_audit(std::span<const double> lltvs, double i_max,
                                             const Market& market, double collateral_units,
                                             double eta) {
    const auto policy = IncentivePolicy::health_linked(i_max);
    const double c = collateral_units * market_price(market);
    const auto lambda = market_penalty_factor(market, c);

    std::vector<BoundaryAuditRow> rows;
    rows.reserve(lltvs.size());
    for (double v : lltvs) {
        const RiskParams params(v, i_max);
        const auto p = position_at_ltv(market, collateral_units, v);
        const double dh = finite_difference_dh(p, params, policy, market, eta * p.q);
        rows.push_back(BoundaryAuditRow{
            .v = v,
            .lambda = lambda.value(),
            .safe_analytic = v <= boundary_safe_lltv(lambda),
            .safe_empirical = dh >= 0.0,
            .dh_empirical = dh,
        });
    }
    return rows;
}

ConvergenceTable convergence_study(const Position& position, const RiskParams& params,
                                   const IncentivePolicy& policy, const Market& market,
                                   std::span<const double> etas) {
    if (etas.empty()) {
        throw std::invalid_argument("convergence_study needs at least one eta");
    }
    const double c = position.collateral_value();
    const double analytic =
        health_differential(c, position.q, params.lltv(),
                            incentive(policy, health(position, params)),
                            market_penalty_factor(market, c));

    ConvergenceTable table;
    table.rows.reserve(etas.size());
    for (double eta : etas) {
        if (!(eta > 0.0 && eta < 1.0)) {
            throw std::invalid_argument("eta must lie in (0, 1)");
        }
        const double fd = finite_difference_dh(position, params, policy, market, eta * position.q);
        const double err = std::abs(fd - analytic);
        const double ratio = table.rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                : table.rows.back().abs_error / err;
        table.rows.push_back({eta, fd, analytic, err, ratio});
    }

    // Least-squares slope in log-log space.
    const auto n = static_cast<double>(table.rows.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : table.rows) {
        const double lx = std::log(r.eta);
        const double ly = std::log(r.abs_error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    table.fitted_order = denom != 0.0 ? (n * sxy - sx * sy) / denom
                                      : std::numeric_limits<double>::quiet_NaN();

    if (table.rows.size() >= 2) {
        const auto& a = table.rows[table.rows.size() - 2];
        const auto& b = table.rows.back();
        table.extrapolated_limit =
            (a.eta * b.finite_difference - b.eta * a.finite_difference) / (a.eta - b.eta);
    } else {
        table.extrapolated_limit = table.rows.back().finite_difference;
    }
    return table;
}

}  // namespace liqtox
