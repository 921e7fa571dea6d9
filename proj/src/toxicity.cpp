#include "liqtox/toxicity.hpp"

#include "liqtox/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liqtox {

namespace {

void require_bonus(double i) {
    if (!(i >= 0.0) || !std::isfinite(i)) {
        throw std::domain_error("bonus i must be finite and >= 0");
    }
}

}  // namespace

double health_differential(double c, double q, double v, double i, PenaltyFactor lambda) {
    if (!(c > 0.0) || !(q > 0.0)) {
        throw std::domain_error("health_differential needs c > 0 and q > 0");
    }
    if (!(v > 0.0)) {
        throw std::domain_error("health_differential needs v > 0");
    }
    require_bonus(i);
    return (v / q) * (c / q - (1.0 + i) * lambda.value());
}

double frontier_constant_bonus(double i, PenaltyFactor lambda) {
    require_bonus(i);
    return 1.0 / ((1.0 + i) * lambda.value());
}

double frontier_dynamic_bonus(double i_max, double v, PenaltyFactor lambda) {
    require_bonus(i_max);
    if (!(v > 0.0 && v < 1.0)) {
        throw std::domain_error("frontier_dynamic_bonus needs 0 < v < 1");
    }
    const double lam = lambda.value();
    return (1.0 + i_max * v * lam) / ((1.0 + i_max) * lam);
}

double boundary_safe_lltv(PenaltyFactor lambda) { return 1.0 / lambda.value(); }

double effective_frontier(const IncentivePolicy& policy, const RiskParams& params,
                          PenaltyFactor lambda) {
    if (policy.kind() == IncentiveKind::Constant) {
        return frontier_constant_bonus(policy.i_max(), lambda);
    }
    return std::min(frontier_dynamic_bonus(policy.i_max(), params.lltv(), lambda),
                    boundary_safe_lltv(lambda));
}

ToxicityVerdict classify(const Position& position, const RiskParams& params,
                         const IncentivePolicy& policy, PenaltyFactor lambda,
                         double tolerance) {
    const double h = health(position, params);
    if (h > 1.0) {
        throw ConditionError(Condition::NotLiquidatable, "position is healthy (h > 1)");
    }
    const double c = position.collateral_value();
    const double l = ltv(position);
    const double i = incentive(policy, h);

    const double threshold = policy.kind() == IncentiveKind::Constant
                                 ? frontier_constant_bonus(policy.i_max(), lambda)
                                 : frontier_dynamic_bonus(policy.i_max(), params.lltv(), lambda);

    return ToxicityVerdict{
        .toxic = l - threshold > tolerance,
        .dh_per_da = health_differential(c, position.q, params.lltv(), i, lambda),
        .threshold_ltv = threshold,
        .ltv = l,
        .incentive = i,
    };
}

}  // namespace liqtox
