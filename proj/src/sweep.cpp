#include "liqtox/sweep.hpp"

#include "liqtox/toxicity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace liqtox {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::CpAmm: return "cpamm";
        case ModelKind::Linear: return "linear";
    }
    return "unknown";
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

namespace {

void validate(const GridSpec& spec) {
    if (spec.models.empty() || spec.lltvs.empty() || spec.bonuses.empty() ||
        spec.depth_ratios.empty() || spec.policies.empty()) {
        throw std::invalid_argument("sweep grid has an empty axis");
    }
    if (!(spec.collateral_units > 0.0) || !(spec.price > 0.0)) {
        throw std::invalid_argument("sweep collateral and price must be > 0");
    }
    if (!(spec.eta > 0.0 && spec.eta < 1.0) || !(spec.tol > 0.0)) {
        throw std::invalid_argument("sweep eta must lie in (0, 1) and tol must be > 0");
    }
    if (!(spec.step_fraction > 0.0 && spec.step_fraction <= 1.0) || spec.max_steps == 0 ||
        !(spec.spiral_ltv_span > 0.0)) {
        throw std::invalid_argument("sweep spiral settings out of range");
    }
}

void append_error(SweepCell& cell, std::string_view stage, const std::exception& e) {
    if (!cell.error.empty()) cell.error += "; ";
    cell.error += stage;
    cell.error += ": ";
    cell.error += e.what();
}

Market market_for(const GridSpec& spec, ModelKind model, double depth_ratio) {
    const double c = spec.collateral_units * spec.price;
    if (model == ModelKind::CpAmm) {
        return cpamm_pool_for_depth_ratio(depth_ratio, c, spec.price);
    }
    if (!(depth_ratio > 0.0)) {
        throw std::invalid_argument("depth ratio must be > 0");
    }
    return linear_market_for_lambda(1.0 + 2.0 / depth_ratio, c, spec.price, spec.linear_gamma);
}

void fill_cell(const GridSpec& spec, SweepCell& cell) {
    std::optional<RiskParams> params;
    std::optional<Market> market;
    try {
        params.emplace(cell.v, cell.i_max);
        market.emplace(market_for(spec, cell.model, cell.depth_ratio));
    } catch (const std::exception& e) {
        append_error(cell, "invalid", e);
        return;
    }
    const IncentivePolicy policy(cell.policy, cell.i_max);
    const double c = spec.collateral_units * spec.price;

    try {
        const auto lambda = market_penalty_factor(*market, c);
        cell.lambda = lambda.value();
        cell.frontier_analytic = effective_frontier(policy, *params, lambda);
        cell.boundary_safe_analytic = cell.v <= boundary_safe_lltv(lambda);
    } catch (const std::exception& e) {
        append_error(cell, "analytic", e);
    }

    try {
        const auto est =
            locate_frontier_empirical(*params, policy, *market, spec.collateral_units, spec.eta,
                                      spec.tol);
        cell.frontier_empirical = est.ltv_star_empirical;
        cell.abs_error = est.abs_error;
    } catch (const std::exception& e) {
        append_error(cell, "frontier", e);
    }

    try {
        const double v[] = {cell.v};
        const auto rows =
            boundary_audit(v, cell.i_max, *market, spec.collateral_units, spec.eta);
        cell.boundary_safe_empirical = rows.front().safe_empirical;
    } catch (const std::exception& e) {
        append_error(cell, "boundary", e);
    }

    try {
        std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                          static_cast<std::uint32_t>(spec.seed >> 32),
                          static_cast<std::uint32_t>(cell.index)};
        std::mt19937_64 rng(seq);
        const double start = cell.v + spec.spiral_ltv_span * (0.01 + 0.99 * unit_uniform(rng));
        cell.initial_ltv = start;
        const auto p = position_at_ltv(*market, spec.collateral_units, start);
        const auto traj = run_spiral(p, *params, policy, *market,
                                     StepRule::fixed_fraction(spec.step_fraction), spec.max_steps);
        cell.outcome = traj.outcome;
        cell.steps = traj.steps.size();
        cell.final_health = traj.final_position.q == 0.0
                                ? std::numeric_limits<double>::infinity()
                                : health(traj.final_position, *params);
        cell.bad_debt = traj.bad_debt;
    } catch (const std::exception& e) {
        append_error(cell, "spiral", e);
    }
}

}  // namespace

SweepGrid run_sweep(const GridSpec& spec) {
    validate(spec);

    SweepGrid grid{spec, {}};
    grid.cells.reserve(spec.cell_count());
    std::size_t index = 0;
    for (auto model : spec.models)
        for (double v : spec.lltvs)
            for (double i : spec.bonuses)
                for (double depth : spec.depth_ratios)
                    for (auto policy : spec.policies) {
                        SweepCell cell{};
                        cell.index = index++;
                        cell.model = model;
                        cell.v = v;
                        cell.i_max = i;
                        cell.depth_ratio = depth;
                        cell.policy = policy;
                        grid.cells.push_back(std::move(cell));
                    }

    unsigned workers = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.cells.size())));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < grid.cells.size(); k = next++) {
            fill_cell(spec, grid.cells[k]);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
        work();
    }
    return grid;
}

namespace {

template <typename T, typename F>
std::string opt(const std::optional<T>& value, F&& fmt) {
    return value ? fmt(*value) : std::string();
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepGrid& grid) {
    const auto num = [](double d) { return format_number(d); };
    const auto boolean = [](bool b) { return std::string(b ? "true" : "false"); };
    out << kSweepCsvHeader << '\n';
    for (const auto& c : grid.cells) {
        out << to_string(c.model) << ',' << format_number(c.v) << ',' << format_number(c.i_max)
            << ',' << format_number(c.depth_ratio) << ',' << to_string(c.policy) << ','
            << opt(c.lambda, num) << ',' << opt(c.frontier_analytic, num) << ','
            << opt(c.frontier_empirical, num) << ',' << opt(c.abs_error, num) << ','
            << opt(c.boundary_safe_analytic, boolean) << ','
            << opt(c.boundary_safe_empirical, boolean) << ','
            << opt(c.outcome, [](SpiralOutcome o) { return std::string(to_string(o)); }) << ','
            << opt(c.steps, [](std::size_t n) { return std::to_string(n); }) << ','
            << opt(c.final_health, num) << ',' << opt(c.bad_debt, num) << ','
            << opt(c.initial_ltv, num) << ',' << csv_escape(c.error) << '\n';
    }
}

}  // namespace liqtox
