// Borrower position accounting and liquidation-incentive policies.
#pragma once

#include <string_view>

namespace liqtox {

// Collateral is held in units and marked at a price so that re-marking from
// pool moves stays explicit; c = s * mark_price is always derived.
struct Position {
    double s;           // collateral units
    double q;           // debt, in debt-asset units
    double mark_price;  // debt units per collateral unit

    double collateral_value() const noexcept { return s * mark_price; }

    // Throws std::invalid_argument when s < 0, q < 0 or mark_price <= 0.
    void validate() const;

    friend bool operator==(const Position&, const Position&) = default;
};

class RiskParams {
public:
    // 0 < v < 1, i_max >= 0.
    RiskParams(double lltv, double i_max);

    double lltv() const noexcept { return lltv_; }
    double i_max() const noexcept { return i_max_; }

    friend bool operator==(const RiskParams&, const RiskParams&) = default;

private:
    double lltv_;
    double i_max_;
};

enum class IncentiveKind { Constant, HealthLinked };

std::string_view to_string(IncentiveKind kind);

// Constant: i(h) = i_max. HealthLinked: i(h) = i_max * clamp(1 - h, 0, 1),
// so the bonus vanishes at the liquidation boundary and never goes negative
// for healthy positions.
class IncentivePolicy {
public:
    static IncentivePolicy constant(double i_max) { return {IncentiveKind::Constant, i_max}; }
    static IncentivePolicy health_linked(double i_max) { return {IncentiveKind::HealthLinked, i_max}; }

    IncentivePolicy(IncentiveKind kind, double i_max);

    IncentiveKind kind() const noexcept { return kind_; }
    double i_max() const noexcept { return i_max_; }

    friend bool operator==(const IncentivePolicy&, const IncentivePolicy&) = default;

private:
    IncentiveKind kind_;
    double i_max_;
};

// q / c. Returns 0 for q = 0; throws ConditionError(WipedOut) when c = 0 and
// q > 0.
double ltv(const Position& position);

// v c / q. Throws ConditionError(NoDebt) when q = 0.
double health(const Position& position, const RiskParams& params);

double incentive(const IncentivePolicy& policy, double h);

// Liquidation is allowed strictly below the boundary (h < 1).
bool is_liquidatable(const Position& position, const RiskParams& params);

}  // namespace liqtox
