#include "liqtox/engine.hpp"

#include "liqtox/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace liqtox {

namespace {

double health_or_inf(const Position& p, const RiskParams& params) {
    return p.q == 0.0 ? std::numeric_limits<double>::infinity() : health(p, params);
}

LiquidationStepResult execute_step(const Position& position, const RiskParams& params,
                                   const IncentivePolicy& policy, const Market& market,
                                   double da, bool check_eligibility) {
    position.validate();
    if (!(da > 0.0) || !std::isfinite(da) || da > position.q) {
        throw std::domain_error("liquidation needs 0 < da <= q, got da = " + std::to_string(da) +
                                ", q = " + std::to_string(position.q));
    }
    const double h_before = health(position, params);
    if (check_eligibility && !(h_before < 1.0)) {
        throw ConditionError(Condition::NotLiquidatable,
                             "position not liquidatable (h = " + std::to_string(h_before) + ")");
    }
    const double i = incentive(policy, h_before);
    const double price_before = position.mark_price;
    const double ds = (1.0 + i) * da / price_before;
    if (ds > position.s) {
        throw ConditionError(Condition::InsufficientCollateral,
                             "seizure of " + std::to_string(ds) + " units exceeds collateral " +
                                 std::to_string(position.s));
    }
    const auto lambda = market_penalty_factor(market, position.collateral_value());
    auto sale = market_sell(market, ds);

    Position after{
        .s = position.s - ds,
        .q = da == position.q ? 0.0 : position.q - da,
        .mark_price = market_price(sale.market),
    };
    return LiquidationStepResult{
        .da = da,
        .ds = ds,
        .proceeds = sale.proceeds,
        .i_applied = i,
        .h_before = h_before,
        .h_after = health_or_inf(after, params),
        .lambda_before = lambda,
        .market_after = std::move(sale.market),
        .position_after = after,
    };
}

}  // namespace

LiquidationStepResult liquidation_step(const Position& position, const RiskParams& params,
                                       const IncentivePolicy& policy, const Market& market,
                                       double da) {
    return execute_step(position, params, policy, market, da, true);
}

LiquidationStepResult probe_step(const Position& position, const RiskParams& params,
                                 const IncentivePolicy& policy, const Market& market, double da) {
    return execute_step(position, params, policy, market, da, false);
}

LiquidationStepResult final_step(const Position& position, const RiskParams& params,
                                 const IncentivePolicy& policy, const Market& market) {
    position.validate();
    const double h_before = health(position, params);
    const double i = incentive(policy, h_before);
    const double c = position.collateral_value();
    // Accept a few ulps of slack so a step that fails the coverage test by
    // rounding alone can still settle here.
    if (!(c < (1.0 + i) * position.q * (1.0 + 1e-12))) {
        throw std::domain_error("final_step requires s P < (1+i) q");
    }
    const auto lambda = market_penalty_factor(market, c);
    auto sale = market_sell(market, position.s);
    const double da = c / (1.0 + i);

    Position after{
        .s = 0.0,
        .q = std::max(0.0, position.q - da),
        .mark_price = market_price(sale.market),
    };
    return LiquidationStepResult{
        .da = position.q - after.q,
        .ds = position.s,
        .proceeds = sale.proceeds,
        .i_applied = i,
        .h_before = h_before,
        .h_after = health_or_inf(after, params),
        .lambda_before = lambda,
        .market_after = std::move(sale.market),
        .position_after = after,
    };
}

double StepRule::debt_to_repay(double q) const {
    if (kind == Kind::FixedFraction) {
        if (!(value > 0.0 && value <= 1.0)) {
            throw std::invalid_argument("step fraction must lie in (0, 1]");
        }
        return value == 1.0 ? q : value * q;
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument("step amount must be finite and > 0");
    }
    return std::min(value, q);
}

std::string_view to_string(SpiralOutcome outcome) {
    switch (outcome) {
        case SpiralOutcome::Recovered: return "Recovered";
        case SpiralOutcome::FullyRepaid: return "FullyRepaid";
        case SpiralOutcome::BadDebt: return "BadDebt";
        case SpiralOutcome::MaxSteps: return "MaxSteps";
    }
    return "unknown";
}

SpiralTrajectory run_spiral(const Position& position, const RiskParams& params,
                            const IncentivePolicy& policy, const Market& market, StepRule rule,
                            std::size_t max_steps) {
    position.validate();
    if (max_steps == 0) {
        throw std::invalid_argument("max_steps must be >= 1");
    }
    rule.debt_to_repay(position.q);  // validates the rule up front
    if (!is_liquidatable(position, params)) {
        throw ConditionError(Condition::NotLiquidatable,
                             "initial position not liquidatable (h >= 1)");
    }

    const double q_epsilon = kRepaidFraction * position.q;
    SpiralTrajectory out{{}, SpiralOutcome::MaxSteps, 0.0, position, market};
    Position current = position;
    Market current_market = market;

    while (true) {
        if (current.q <= q_epsilon) {
            out.outcome = SpiralOutcome::FullyRepaid;
            break;
        }
        if (current.s == 0.0) {
            out.outcome = SpiralOutcome::BadDebt;
            out.bad_debt = current.q;
            break;
        }
        if (health(current, params) >= 1.0) {
            out.outcome = SpiralOutcome::Recovered;
            break;
        }
        if (out.steps.size() >= max_steps) {
            out.outcome = SpiralOutcome::MaxSteps;
            break;
        }

        const double da = rule.debt_to_repay(current.q);
        const double i = incentive(policy, health(current, params));
        const bool covered = (1.0 + i) * da / current.mark_price <= current.s;
        auto step = covered ? liquidation_step(current, params, policy, current_market, da)
                            : final_step(current, params, policy, current_market);
        current = step.position_after;
        current_market = step.market_after;
        out.steps.push_back(std::move(step));
    }

    out.final_position = current;
    out.final_market = current_market;
    return out;
}

}  // namespace liqtox
