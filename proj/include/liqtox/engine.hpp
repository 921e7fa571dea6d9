// Discrete liquidation engine: one finite step at a time through an exact
// market, and the spiral loop that repeats steps until the position heals,
// is repaid, or runs out of collateral.
#pragma once

#include "liqtox/lending.hpp"
#include "liqtox/market_impact.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace liqtox {

struct LiquidationStepResult {
    double da;               // debt repaid
    double ds;               // collateral units seized
    double proceeds;         // debt units received from the sale
    double i_applied;
    double h_before;
    double h_after;          // +inf once the debt is fully repaid
    PenaltyFactor lambda_before;
    Market market_after;
    Position position_after;

    // Liquidator profit at finite size; may be negative.
    double liquidator_profit() const noexcept { return proceeds - da; }
};

// Step mechanics:
//   1. i = incentive(policy, h_before)
//   2. ds = (1 + i) da / P_before       (seizure valued at the pre-step mark)
//   3. sell ds through the exact market primitive
//   4. q -= da, s -= ds, mark = market price after the sale
//   5. recompute h
//
// Requires h < 1 and 0 < da <= q. Throws std::domain_error for a bad da,
// ConditionError(NotLiquidatable) for h >= 1 and
// ConditionError(InsufficientCollateral) when ds > s.
LiquidationStepResult liquidation_step(const Position& position, const RiskParams& params,
                                       const IncentivePolicy& policy, const Market& market,
                                       double da);

// Same mechanics as liquidation_step without the h < 1 eligibility gate.
// Used to probe the health response at and above the boundary.
LiquidationStepResult probe_step(const Position& position, const RiskParams& params,
                                 const IncentivePolicy& policy, const Market& market, double da);

// Terminal step when the remaining collateral cannot cover (1+i) q: seize
// everything, repay s P / (1+i), and leave the residual debt as bad debt.
// Requires s P < (1+i) q.
LiquidationStepResult final_step(const Position& position, const RiskParams& params,
                                 const IncentivePolicy& policy, const Market& market);

struct StepRule {
    enum class Kind { FixedFraction, FixedAmount };

    Kind kind;
    double value;  // eta in (0, 1] or a positive debt amount

    static StepRule fixed_fraction(double eta) { return {Kind::FixedFraction, eta}; }
    static StepRule fixed_amount(double amount) { return {Kind::FixedAmount, amount}; }

    double debt_to_repay(double q) const;

    friend bool operator==(const StepRule&, const StepRule&) = default;
};

enum class SpiralOutcome { Recovered, FullyRepaid, BadDebt, MaxSteps };

std::string_view to_string(SpiralOutcome outcome);

struct SpiralTrajectory {
    std::vector<LiquidationStepResult> steps;
    SpiralOutcome outcome;
    double bad_debt;
    Position final_position;
    Market final_market;
};

inline constexpr std::size_t kDefaultMaxSteps = 1'000'000;
// Debt at or below this fraction of the initial debt counts as repaid.
inline constexpr double kRepaidFraction = 1e-9;

// Throws ConditionError(NotLiquidatable) when the initial h >= 1.
SpiralTrajectory run_spiral(const Position& position, const RiskParams& params,
                            const IncentivePolicy& policy, const Market& market,
                            StepRule rule, std::size_t max_steps = kDefaultMaxSteps);

}  // namespace liqtox
