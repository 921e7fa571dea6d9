#include "liqtox/errors.hpp"

namespace liqtox {

std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::WipedOut: return "wiped_out";
        case Condition::NoDebt: return "no_debt";
        case Condition::NotLiquidatable: return "not_liquidatable";
        case Condition::MarketExhausted: return "market_exhausted";
        case Condition::InsufficientCollateral: return "insufficient_collateral";
        case Condition::NoFrontierInRange: return "no_frontier_in_range";
    }
    return "unknown";
}

}  // namespace liqtox
