// Price-impact models: exact constant-product swaps and the linear
// (Kyle-style) slippage model. Both expose a liquidity penalty factor
// lambda and a sale primitive used by the liquidation engine.
#pragma once

#include <variant>

namespace liqtox {

// Liquidity penalty factor, always >= 1. Equals 1 only in the zero-impact
// limit.
class PenaltyFactor {
public:
    explicit PenaltyFactor(double lambda);

    double value() const noexcept { return lambda_; }

    friend bool operator==(const PenaltyFactor&, const PenaltyFactor&) = default;

private:
    double lambda_;
};

struct CpAmmSale;

// Constant-product pool without fees. x is the collateral reserve, y the
// debt-asset reserve, k = x*y fixed at construction.
class CpAmmPool {
public:
    CpAmmPool(double x, double y);

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double k() const noexcept { return k_; }

    friend bool operator==(const CpAmmPool&, const CpAmmPool&) = default;

private:
    CpAmmPool(double x, double y, double k) : x_(x), y_(y), k_(k) {}

    double x_;
    double y_;
    double k_;

    friend CpAmmSale cpamm_sell_collateral(const CpAmmPool&, double);
};

struct CpAmmSale {
    double proceeds;  // debt units paid out by the pool
    CpAmmPool pool;   // pool after the swap
};

// Spot price y/x in debt units per collateral unit.
double cpamm_spot_price(const CpAmmPool& pool);

// Exact swap of ds collateral units into the pool. The new y reserve is
// anchored to k so the invariant does not drift across repeated swaps.
// Throws std::domain_error for negative or non-finite ds.
CpAmmSale cpamm_sell_collateral(const CpAmmPool& pool, double ds);

// First-order log-price change -2*ds/x.
double cpamm_log_price_impact_linearized(const CpAmmPool& pool, double ds);

// lambda = 1 + 2c/y for collateral value c.
PenaltyFactor cpamm_penalty_factor(const CpAmmPool& pool, double c);

// Linear slippage s(v) = gamma + (sigma/L) v, with per-unit permanent
// impact phi = sigma / (L (1 - gamma)).
class LinearImpactModel {
public:
    LinearImpactModel(double gamma, double sigma, double liquidity);

    double gamma() const noexcept { return gamma_; }
    double sigma() const noexcept { return sigma_; }
    double liquidity() const noexcept { return liquidity_; }
    double phi() const noexcept { return phi_; }

    // Relative discount on a sale of the given value.
    double discount(double value) const noexcept { return gamma_ + sigma_ / liquidity_ * value; }

    friend bool operator==(const LinearImpactModel&, const LinearImpactModel&) = default;

private:
    double gamma_;
    double sigma_;
    double liquidity_;
    double phi_;
};

struct LinearSale {
    double proceeds;
    double price;  // mark price after permanent impact
};

// Sells `value` debt units worth of collateral at the given mark price.
// proceeds = value (1 - s(value)); price' = price (1 - phi value), floored at
// a small positive fraction of the old price. Throws ConditionError
// (MarketExhausted) when s(value) >= 1 and std::domain_error for value < 0.
LinearSale linear_execute_sale(const LinearImpactModel& model, double value, double price);

// lambda = 1 + phi c.
PenaltyFactor linear_penalty_factor(const LinearImpactModel& model, double c);

// The linear model carries no reserves, so its state is the model plus the
// current mark price.
struct LinearMarket {
    LinearImpactModel model;
    double price;

    friend bool operator==(const LinearMarket&, const LinearMarket&) = default;
};

using Market = std::variant<CpAmmPool, LinearMarket>;

struct MarketSale {
    double proceeds;
    Market market;
};

double market_price(const Market& market);

// Sells ds collateral units through whichever model backs the market.
MarketSale market_sell(const Market& market, double ds);

PenaltyFactor market_penalty_factor(const Market& market, double c);

// Markets realising a target penalty factor for collateral value c at the
// given price. A lambda of exactly 1 needs infinite depth, so the CP-AMM
// builder rejects it; use the linear builder (sigma = 0) for that case.
CpAmmPool cpamm_pool_for_lambda(double lambda, double c, double price);
CpAmmPool cpamm_pool_for_depth_ratio(double depth_ratio, double c, double price);
LinearMarket linear_market_for_lambda(double lambda, double c, double price, double gamma = 0.0);

}  // namespace liqtox
