#include "liqtox/lending.hpp"

#include "liqtox/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace liqtox {

void Position::validate() const {
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument("position.s must be finite and >= 0");
    }
    if (!(q >= 0.0) || !std::isfinite(q)) {
        throw std::invalid_argument("position.q must be finite and >= 0");
    }
    if (!(mark_price > 0.0) || !std::isfinite(mark_price)) {
        throw std::invalid_argument("position.mark_price must be finite and > 0");
    }
}

RiskParams::RiskParams(double lltv, double i_max) : lltv_(lltv), i_max_(i_max) {
    if (!(lltv > 0.0 && lltv < 1.0)) {
        throw std::invalid_argument("LLTV v must lie in (0, 1)");
    }
    if (!(i_max >= 0.0) || !std::isfinite(i_max)) {
        throw std::invalid_argument("i_max must be finite and >= 0");
    }
}

std::string_view to_string(IncentiveKind kind) {
    switch (kind) {
        case IncentiveKind::Constant: return "constant";
        case IncentiveKind::HealthLinked: return "health_linked";
    }
    return "unknown";
}

IncentivePolicy::IncentivePolicy(IncentiveKind kind, double i_max) : kind_(kind), i_max_(i_max) {
    if (!(i_max >= 0.0) || !std::isfinite(i_max)) {
        throw std::invalid_argument("incentive i_max must be finite and >= 0");
    }
}

double ltv(const Position& position) {
    const double c = position.collateral_value();
    if (position.q == 0.0) {
        return 0.0;
    }
    if (c == 0.0) {
        throw ConditionError(Condition::WipedOut, "collateral wiped out with outstanding debt");
    }
    return position.q / c;
}

double health(const Position& position, const RiskParams& params) {
    if (position.q == 0.0) {
        throw ConditionError(Condition::NoDebt, "health undefined: position has no debt");
    }
    return params.lltv() * position.collateral_value() / position.q;
}

double incentive(const IncentivePolicy& policy, double h) {
    if (policy.kind() == IncentiveKind::Constant) {
        return policy.i_max();
    }
    // 1 - 1 == 0 exactly, so the boundary bonus carries no rounding fuzz.
    return policy.i_max() * std::clamp(1.0 - h, 0.0, 1.0);
}

bool is_liquidatable(const Position& position, const RiskParams& params) {
    return position.q > 0.0 && health(position, params) < 1.0;
}

}  // namespace liqtox
