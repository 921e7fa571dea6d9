// Parameter sweeps over (model, v, i_max, depth ratio, policy).
//
// Depth is expressed as the ratio y/c so both impact models share the same
// penalty factor, lambda = 1 + 2 / depth_ratio: the CP-AMM pool gets
// y = depth_ratio * c, and the linear model gets phi = 2 / (depth_ratio * c).
#pragma once

#include "liqtox/analysis.hpp"
#include "liqtox/engine.hpp"
#include "liqtox/lending.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace liqtox {

enum class ModelKind { CpAmm, Linear };

std::string_view to_string(ModelKind kind);

struct GridSpec {
    std::vector<ModelKind> models{ModelKind::CpAmm};
    std::vector<double> lltvs;
    std::vector<double> bonuses;
    std::vector<double> depth_ratios;
    std::vector<IncentiveKind> policies{IncentiveKind::Constant, IncentiveKind::HealthLinked};

    double collateral_units = 100.0;
    double price = 1.0;
    double eta = kDefaultEta;
    double tol = 1e-9;
    std::uint64_t seed = 0;

    // Spiral run per cell: starting LTV drawn uniformly above v within
    // spiral_ltv_span, stepped by a fixed fraction of current debt.
    double step_fraction = 0.01;
    std::size_t max_steps = 100'000;
    double spiral_ltv_span = 0.1;

    double linear_gamma = 0.0;
    unsigned threads = 0;  // 0 = hardware concurrency

    std::size_t cell_count() const noexcept {
        return models.size() * lltvs.size() * bonuses.size() * depth_ratios.size() *
               policies.size();
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct SweepCell {
    std::size_t index;
    ModelKind model;
    double v;
    double i_max;
    double depth_ratio;
    IncentiveKind policy;

    std::optional<double> lambda;
    std::optional<double> frontier_analytic;
    std::optional<double> frontier_empirical;
    std::optional<double> abs_error;
    std::optional<bool> boundary_safe_analytic;
    std::optional<bool> boundary_safe_empirical;
    std::optional<double> initial_ltv;
    std::optional<SpiralOutcome> outcome;
    std::optional<std::size_t> steps;
    std::optional<double> final_health;
    std::optional<double> bad_debt;

    std::string error;  // empty when every part of the cell completed
};

struct SweepGrid {
    GridSpec spec;
    std::vector<SweepCell> cells;  // row-major: model, v, i_max, depth, policy
};

// Throws std::invalid_argument for an empty axis or non-positive settings.
// Per-cell failures are recorded in SweepCell::error.
SweepGrid run_sweep(const GridSpec& spec);

// Fixed column order; numbers printed with 12 significant digits.
inline constexpr std::string_view kSweepCsvHeader =
    "model,v,i_max,depth_ratio,policy,lambda,frontier_analytic,frontier_empirical,abs_error,"
    "boundary_safe_analytic,boundary_safe_empirical,outcome,steps,final_health,bad_debt,"
    "initial_ltv,error";

void write_sweep_csv(std::ostream& out, const SweepGrid& grid);

std::string format_number(double value);
std::string csv_escape(std::string_view field);

}  // namespace liqtox
