#include "liqtox/market_impact.hpp"

#include "liqtox/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace liqtox {

namespace {

// Linear-model price floor as a fraction of the pre-trade price.
constexpr double kPriceFloorRatio = 1e-12;

void require_finite_nonnegative(double value, const char* what) {
    if (!std::isfinite(value) || value < 0.0) {
        throw std::domain_error(std::string(what) + " must be finite and >= 0, got " +
                                std::to_string(value));
    }
}

}  // namespace

PenaltyFactor::PenaltyFactor(double lambda) : lambda_(lambda) {
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("penalty factor must be finite and >= 1, got " +
                                    std::to_string(lambda));
    }
}

// ----------------------------------------------------------------------------
// CP-AMM
// ----------------------------------------------------------------------------

CpAmmPool::CpAmmPool(double x, double y) : x_(x), y_(y), k_(x * y) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y) ||
        !std::isfinite(k_) || !(k_ > 0.0)) {
        throw std::invalid_argument("pool reserves must be finite and > 0");
    }
}

double cpamm_spot_price(const CpAmmPool& pool) { return pool.y() / pool.x(); }

CpAmmSale cpamm_sell_collateral(const CpAmmPool& pool, double ds) {
    require_finite_nonnegative(ds, "sale size ds");
    if (ds == 0.0) {
        return {0.0, pool};
    }
    const double new_x = pool.x_ + ds;
    // y*ds/(x+ds) keeps full relative precision for tiny ds; y - k/(x+ds)
    // would cancel.
    const double proceeds = pool.y_ * (ds / new_x);
    const double new_y = pool.k_ / new_x;
    return {proceeds, CpAmmPool(new_x, new_y, pool.k_)};
}

double cpamm_log_price_impact_linearized(const CpAmmPool& pool, double ds) {
    require_finite_nonnegative(ds, "sale size ds");
    return -2.0 * ds / pool.x();
}

PenaltyFactor cpamm_penalty_factor(const CpAmmPool& pool, double c) {
    require_finite_nonnegative(c, "collateral value c");
    return PenaltyFactor(1.0 + 2.0 * c / pool.y());
}

// ----------------------------------------------------------------------------
// Linear impact
// ----------------------------------------------------------------------------

LinearImpactModel::LinearImpactModel(double gamma, double sigma, double liquidity)
    : gamma_(gamma), sigma_(sigma), liquidity_(liquidity), phi_(0.0) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in [0, 1)");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("sigma must be finite and >= 0");
    }
    if (!(liquidity > 0.0) || !std::isfinite(liquidity)) {
        throw std::invalid_argument("liquidity scale L must be finite and > 0");
    }
    phi_ = sigma / (liquidity * (1.0 - gamma));
}

LinearSale linear_execute_sale(const LinearImpactModel& model, double value, double price) {
    require_finite_nonnegative(value, "sale value");
    if (!(price > 0.0)) {
        throw std::domain_error("mark price must be > 0");
    }
    if (value == 0.0) {
        return {0.0, price};
    }
    const double s = model.discount(value);
    if (s >= 1.0) {
        throw ConditionError(Condition::MarketExhausted,
                             "linear market exhausted: discount " + std::to_string(s) +
                                 " >= 1 for sale value " + std::to_string(value));
    }
    const double proceeds = std::max(0.0, value * (1.0 - s));
    const double new_price =
        std::max(price * (1.0 - model.phi() * value), price * kPriceFloorRatio);
    return {proceeds, new_price};
}

PenaltyFactor linear_penalty_factor(const LinearImpactModel& model, double c) {
    require_finite_nonnegative(c, "collateral value c");
    return PenaltyFactor(1.0 + model.phi() * c);
}

// ----------------------------------------------------------------------------
// Market dispatch
// ----------------------------------------------------------------------------

double market_price(const Market& market) {
    if (const auto* pool = std::get_if<CpAmmPool>(&market)) {
        return cpamm_spot_price(*pool);
    }
    return std::get<LinearMarket>(market).price;
}

MarketSale market_sell(const Market& market, double ds) {
    if (const auto* pool = std::get_if<CpAmmPool>(&market)) {
        auto sale = cpamm_sell_collateral(*pool, ds);
        return {sale.proceeds, sale.pool};
    }
    require_finite_nonnegative(ds, "sale size ds");
    const auto& lin = std::get<LinearMarket>(market);
    auto sale = linear_execute_sale(lin.model, ds * lin.price, lin.price);
    return {sale.proceeds, LinearMarket{lin.model, sale.price}};
}

PenaltyFactor market_penalty_factor(const Market& market, double c) {
    if (const auto* pool = std::get_if<CpAmmPool>(&market)) {
        return cpamm_penalty_factor(*pool, c);
    }
    return linear_penalty_factor(std::get<LinearMarket>(market).model, c);
}

CpAmmPool cpamm_pool_for_lambda(double lambda, double c, double price) {
    if (!(lambda > 1.0) || !(c > 0.0) || !(price > 0.0)) {
        throw std::invalid_argument("cpamm_pool_for_lambda needs lambda > 1, c > 0, price > 0");
    }
    const double y = 2.0 * c / (lambda - 1.0);
    return CpAmmPool(y / price, y);
}

CpAmmPool cpamm_pool_for_depth_ratio(double depth_ratio, double c, double price) {
    if (!(depth_ratio > 0.0) || !(c > 0.0) || !(price > 0.0)) {
        throw std::invalid_argument("cpamm_pool_for_depth_ratio needs positive arguments");
    }
    const double y = depth_ratio * c;
    return CpAmmPool(y / price, y);
}

LinearMarket linear_market_for_lambda(double lambda, double c, double price, double gamma) {
    if (!(lambda >= 1.0) || !(price > 0.0) || !(c >= 0.0)) {
        throw std::invalid_argument("linear_market_for_lambda needs lambda >= 1, c >= 0, price > 0");
    }
    if (lambda > 1.0 && c == 0.0) {
        throw std::invalid_argument("lambda > 1 is unreachable with c = 0");
    }
    // Liquidity scale L = c, so phi c = sigma / (1 - gamma) = lambda - 1.
    const double liquidity = c > 0.0 ? c : 1.0;
    const double sigma = (lambda - 1.0) * (1.0 - gamma);
    return LinearMarket{LinearImpactModel(gamma, sigma, liquidity), price};
}

}  // namespace liqtox
