#include "liqtox/commands.hpp"

#include "liqtox/errors.hpp"
#include "liqtox/toxicity.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace liqtox {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view model_name(const ScenarioConfig& cfg) {
    return std::holds_alternative<CpAmmConfig>(cfg.market) ? "cpamm" : "linear";
}

std::string num(std::optional<double> d) { return d ? format_number(*d) : std::string(); }

json jnum(std::optional<double> d) {
    if (!d || std::isnan(*d)) return nullptr;
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return *d;
}

std::optional<double> ltv_or_inf(const Position& p) {
    if (p.q == 0.0) return 0.0;
    if (p.collateral_value() == 0.0) return kInf;
    return p.q / p.collateral_value();
}

std::optional<double> health_or_inf(const Position& p, const RiskParams& params) {
    if (p.q == 0.0) return kInf;
    return health(p, params);
}

}  // namespace

// ----------------------------------------------------------------------------
// frontier
// ----------------------------------------------------------------------------

int cmd_frontier(const ScenarioConfig& cfg, const CommandOptions& opts, std::ostream& data,
                 std::ostream& info) {
    const auto market = cfg.build_market();
    const auto position = cfg.build_position();
    const auto params = cfg.build_params();
    const auto policy = cfg.build_policy();
    const double c = position.collateral_value();
    const auto lambda = market_penalty_factor(market, c);

    if (c == 0.0) {
        info << "warning: collateral value is 0; penalty factor degenerates to 1\n";
    }

    const std::optional<double> l = ltv_or_inf(position);
    const std::optional<double> h = health_or_inf(position, params);
    std::string verdict;
    std::optional<double> dh;
    if (position.q == 0.0) {
        verdict = "no_debt";
    } else if (c == 0.0) {
        verdict = "wiped_out";
    } else {
        dh = health_differential(c, position.q, params.lltv(), incentive(policy, *h), lambda);
        if (*h > 1.0) {
            verdict = "healthy";
        } else {
            verdict = classify(position, params, policy, lambda).toxic ? "toxic" : "benign";
        }
    }

    const double f_const = frontier_constant_bonus(params.i_max(), lambda);
    const double f_dyn = frontier_dynamic_bonus(params.i_max(), params.lltv(), lambda);
    const double f_eff = effective_frontier(policy, params, lambda);
    const double safe = boundary_safe_lltv(lambda);

    if (opts.format == OutputFormat::Records) {
        json j = {
            {"model", model_name(cfg)},
            {"c", c},
            {"ltv", jnum(l)},
            {"health", jnum(h)},
            {"policy", std::string(to_string(policy.kind()))},
            {"lambda", lambda.value()},
            {"frontier_constant", f_const},
            {"frontier_dynamic", f_dyn},
            {"frontier_effective", f_eff},
            {"boundary_safe_lltv", safe},
            {"verdict", verdict},
            {"dh_per_da", jnum(dh)},
        };
        data << j.dump() << '\n';
    } else {
        data << kFrontierCsvHeader << '\n'
             << model_name(cfg) << ',' << format_number(c) << ',' << num(l) << ',' << num(h)
             << ',' << to_string(policy.kind()) << ',' << format_number(lambda.value()) << ','
             << format_number(f_const) << ',' << format_number(f_dyn) << ','
             << format_number(f_eff) << ',' << format_number(safe) << ',' << verdict << ','
             << num(dh) << '\n';
    }
    return kExitSuccess;
}

// ----------------------------------------------------------------------------
// simulate
// ----------------------------------------------------------------------------

int cmd_simulate(const ScenarioConfig& cfg, const CommandOptions& opts, std::ostream& data,
                 std::ostream& info) {
    const auto market = cfg.build_market();
    const auto position = cfg.build_position();
    const auto params = cfg.build_params();
    const auto policy = cfg.build_policy();

    if (position.q == 0.0 || !is_liquidatable(position, params)) {
        info << "error: position is not liquidatable (health >= 1 or no debt); nothing to simulate\n";
        return kExitNotLiquidatable;
    }

    const double c0 = position.collateral_value();
    const auto initial = classify(position, params, policy, market_penalty_factor(market, c0));

    std::optional<SpiralTrajectory> run;
    try {
        run = run_spiral(position, params, policy, market, cfg.step_rule, cfg.max_steps);
    } catch (const ConditionError& e) {
        info << "error: simulation stopped (" << to_string(e.code()) << "): " << e.what() << '\n';
        return kExitSimulationError;
    }
    const auto& traj = *run;

    const bool records = opts.format == OutputFormat::Records;
    if (!records) data << kTrajectoryCsvHeader << '\n';

    Position before = position;
    for (std::size_t k = 0; k < traj.steps.size(); ++k) {
        const auto& st = traj.steps[k];
        std::optional<bool> toxic;
        if (before.collateral_value() > 0.0 && st.h_before <= 1.0) {
            toxic = classify(before, params, policy, st.lambda_before).toxic;
        }
        const auto& after = st.position_after;
        if (records) {
            json j = {
                {"type", "step"},
                {"step", k + 1},
                {"da", st.da},
                {"ds", st.ds},
                {"proceeds", st.proceeds},
                {"i_applied", st.i_applied},
                {"h_before", jnum(st.h_before)},
                {"h_after", jnum(st.h_after)},
                {"ltv_before", jnum(ltv_or_inf(before))},
                {"ltv_after", jnum(ltv_or_inf(after))},
                {"lambda_before", st.lambda_before.value()},
                {"price_after", after.mark_price},
                {"s_after", after.s},
                {"q_after", after.q},
                {"liquidator_profit", st.liquidator_profit()},
                {"toxic", toxic ? json(*toxic) : json(nullptr)},
            };
            data << j.dump() << '\n';
        } else {
            data << (k + 1) << ',' << format_number(st.da) << ',' << format_number(st.ds) << ','
                 << format_number(st.proceeds) << ',' << format_number(st.i_applied) << ','
                 << format_number(st.h_before) << ',' << format_number(st.h_after) << ','
                 << num(ltv_or_inf(before)) << ',' << num(ltv_or_inf(after)) << ','
                 << format_number(st.lambda_before.value()) << ','
                 << format_number(after.mark_price) << ',' << format_number(after.s) << ','
                 << format_number(after.q) << ',' << format_number(st.liquidator_profit()) << ','
                 << (toxic ? (*toxic ? "true" : "false") : "") << '\n';
        }
        before = after;
    }

    const auto final_h = health_or_inf(traj.final_position, params);
    if (records) {
        json j = {
            {"type", "summary"},
            {"outcome", std::string(to_string(traj.outcome))},
            {"steps", traj.steps.size()},
            {"bad_debt", traj.bad_debt},
            {"final_health", jnum(final_h)},
            {"initial_health", health(position, params)},
            {"initial_dh_per_da", initial.dh_per_da},
            {"initial_verdict", initial.toxic ? "toxic" : "benign"},
        };
        data << j.dump() << '\n';
    }
    info << "summary outcome=" << to_string(traj.outcome) << " steps=" << traj.steps.size()
         << " bad_debt=" << format_number(traj.bad_debt) << " final_health=" << num(final_h)
         << " initial_health=" << format_number(health(position, params))
         << " initial_dh_per_da=" << format_number(initial.dh_per_da)
         << " initial_verdict=" << (initial.toxic ? "toxic" : "benign") << '\n';
    return kExitSuccess;
}

// ----------------------------------------------------------------------------
// sweep
// ----------------------------------------------------------------------------

int cmd_sweep(GridSpec grid, const CommandOptions& opts, std::ostream& data, std::ostream& info) {
    if (opts.format != OutputFormat::Csv) {
        info << "error: sweep output is CSV only\n";
        return kExitConfigError;
    }
    if (opts.eta) grid.eta = *opts.eta;
    if (opts.tol) grid.tol = *opts.tol;
    if (opts.seed) grid.seed = *opts.seed;

    SweepGrid result;
    try {
        result = run_sweep(grid);
    } catch (const std::invalid_argument& e) {
        info << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    write_sweep_csv(data, result);

    std::size_t failed = 0;
    for (const auto& c : result.cells) failed += !c.error.empty();
    info << "sweep cells=" << result.cells.size() << " with_errors=" << failed << '\n';
    return kExitSuccess;
}

// ----------------------------------------------------------------------------
// verify
// ----------------------------------------------------------------------------

int cmd_verify(VerifySpec spec, const CommandOptions& opts, std::ostream& data,
               std::ostream& info) {
    if (opts.eta) spec.eta = *opts.eta;
    if (opts.tol) spec.tol = *opts.tol;
    if (opts.seed) spec.seed = *opts.seed;
    if (opts.perturb_lambda) spec.perturb_lambda = *opts.perturb_lambda;

    std::vector<PropertyResult> results;
    try {
        results = run_verification(spec);
    } catch (const std::invalid_argument& e) {
        info << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        data << (r.passed ? "PASS " : "FAIL ") << r.name << " measured=" << format_number(r.measured)
             << " threshold=" << format_number(r.threshold) << " (" << r.detail << ")\n";
    }
    data << (all ? "all properties passed" : "verification FAILED") << '\n';
    return all ? kExitSuccess : kExitVerificationFailed;
}

}  // namespace liqtox
