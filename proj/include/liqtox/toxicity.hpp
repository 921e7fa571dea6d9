// Analytic toxicity conditions for a single infinitesimal liquidation step.
//
// A step that repays da of debt seizes (1+i) da of collateral value and, via
// price impact, re-marks the remainder. Summarising the impact by a penalty
// factor lambda, the health rate is
//
//     dh/da = (v/q) * (c/q - (1+i) lambda)
//
// and the step is toxic (health falls) when the LTV exceeds a frontier l*.
// Every function takes lambda as an input so either impact model composes.
#pragma once

#include "liqtox/lending.hpp"
#include "liqtox/market_impact.hpp"

namespace liqtox {

struct ToxicityVerdict {
    bool toxic;
    double dh_per_da;      // 1 / debt units
    double threshold_ltv;  // l*
    double ltv;
    double incentive;      // bonus the verdict was evaluated with
};

// (v/q) * (c/q - (1+i) lambda). Requires c > 0, q > 0, i >= 0.
double health_differential(double c, double q, double v, double i, PenaltyFactor lambda);

// 1 / ((1+i) lambda). Toxic iff l > l*.
double frontier_constant_bonus(double i, PenaltyFactor lambda);

// (1 + i_max v lambda) / ((1 + i_max) lambda), the frontier once the bonus
// i(h) = i_max (1 - h) is substituted. Valid for liquidatable states (l >= v).
double frontier_dynamic_bonus(double i_max, double v, PenaltyFactor lambda);

// 1 / lambda: largest LLTV for which a health-linked liquidation entered at
// l = v does not reduce health.
double boundary_safe_lltv(PenaltyFactor lambda);

// Frontier for the policy over all LTVs, including h > 1 where the
// health-linked bonus clamps to zero. For Constant this is the constant-bonus
// frontier. For HealthLinked it is min(dynamic frontier, 1/lambda): when
// v lambda <= 1 the dynamic frontier lies in the liquidatable region, and
// otherwise every liquidatable state is toxic and the sign change sits at
// 1/lambda on the healthy side.
double effective_frontier(const IncentivePolicy& policy, const RiskParams& params,
                          PenaltyFactor lambda);

// Verdict for a state at or below the boundary (h <= 1). The bonus is taken
// at the pre-step health, and the frontier is chosen by policy kind. A state
// is toxic when l - l* > tolerance; equality counts as benign.
// Throws ConditionError(NotLiquidatable) when h > 1.
ToxicityVerdict classify(const Position& position, const RiskParams& params,
                         const IncentivePolicy& policy, PenaltyFactor lambda,
                         double tolerance = 0.0);

}  // namespace liqtox
