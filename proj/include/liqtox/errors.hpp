// Error conditions raised by the liquidation model.
//
// Caller bugs (negative trade sizes, out-of-range parameters) are reported
// with std::domain_error / std::invalid_argument. Market or position states
// that a caller is expected to branch on are reported as ConditionError so
// they can be told apart by code rather than by message text.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liqtox {

enum class Condition {
    WipedOut,                // c = 0 with outstanding debt, LTV infinite
    NoDebt,                  // q = 0, health undefined
    NotLiquidatable,         // h >= 1
    MarketExhausted,         // linear model discount s(value) >= 1
    InsufficientCollateral,  // seizure would exceed held units
    NoFrontierInRange,       // bisection bracket has no sign change
};

std::string_view to_string(Condition c);

class ConditionError : public std::runtime_error {
public:
    ConditionError(Condition code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Condition code() const noexcept { return code_; }

private:
    Condition code_;
};

}  // namespace liqtox
