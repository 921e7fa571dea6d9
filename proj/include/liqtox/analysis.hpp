// Numerical verification of the analytic frontiers against the discrete
// engine. Everything empirical here goes through engine steps with exact
// swaps; the analytic formulas are only used as the thing being compared
// against.
#pragma once

#include "liqtox/engine.hpp"
#include "liqtox/lending.hpp"
#include "liqtox/market_impact.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace liqtox {

// Default step size for empirical work, as a fraction of current debt.
inline constexpr double kDefaultEta = 1e-6;

// (h_after - h_before) / da from a single probe step. Accepts states at or
// above the boundary (see probe_step). Requires 0 < da < q.
double finite_difference_dh(const Position& position, const RiskParams& params,
                            const IncentivePolicy& policy, const Market& market, double da);

// Position holding `collateral_units` marked at the market price, with debt
// set so that LTV = ltv.
Position position_at_ltv(const Market& market, double collateral_units, double ltv);

struct FrontierBracket {
    double lo = 0.01;
    double hi = 3.0;
};

struct FrontierEstimate {
    double ltv_star_empirical;
    double ltv_star_analytic;
    double eta;
    double abs_error;
    int iterations;
    double bracket_lo;  // final bracket, benign side
    double bracket_hi;  // final bracket, toxic side
};

// Bisects on LTV with collateral held fixed (so lambda stays constant) until
// the bracket is no wider than tol. The sign at each LTV is that of
// finite_difference_dh with da = eta * q. The analytic comparison value is
// effective_frontier(). Throws ConditionError(NoFrontierInRange) if the
// bracket endpoints do not straddle a benign/toxic change.
FrontierEstimate locate_frontier_empirical(const RiskParams& params, const IncentivePolicy& policy,
                                           const Market& market, double collateral_units,
                                           double eta, double tol, FrontierBracket bracket = {});

struct BoundaryAuditRow {
    double v;
    double lambda;
    bool safe_analytic;   // v <= 1/lambda
    bool safe_empirical;  // finite-difference dh >= 0 at l = v
    double dh_empirical;
};

// For each LLTV v, places a position exactly at l = v under the health-linked
// policy (bonus zero there) and records the sign of the empirical dh.
std::vector<BoundaryAuditRow> boundary_audit(std::span<const double> lltvs, double i_max,
                                             const Market& market, double collateral_units,
                                             double eta = kDefaultEta);

struct ConvergenceRow {
    double eta;
    double finite_difference;
    double analytic;
    double abs_error;
    double ratio;  // previous row's error / this error; NaN on the first row
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double fitted_order;        // least-squares slope of log error vs log eta
    double extrapolated_limit;  // first-order Richardson limit from the last two rows
};

ConvergenceTable convergence_study(const Position& position, const RiskParams& params,
                                   const IncentivePolicy& policy, const Market& market,
                                   std::span<const double> etas);

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace liqtox
