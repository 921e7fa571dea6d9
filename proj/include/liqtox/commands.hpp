// Subcommand implementations behind the `liqtox` executable. Each takes an
// already-loaded configuration and writes to the supplied streams, so they
// can be exercised without touching the filesystem.
#pragma once

#include "liqtox/config.hpp"

#include <cstdint>
#include <optional>
#include <ostream>

namespace liqtox {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitVerificationFailed = 1,
    kExitConfigError = 2,
    kExitNotLiquidatable = 3,
    kExitSimulationError = 4,  // the market could not absorb a required sale
};

enum class OutputFormat { Csv, Records };

struct CommandOptions {
    std::optional<double> eta;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<double> perturb_lambda;
    OutputFormat format = OutputFormat::Csv;
};

// `data` receives the command's tabular output; `info` receives summaries,
// warnings and diagnostics.
int cmd_frontier(const ScenarioConfig& cfg, const CommandOptions& opts, std::ostream& data,
                 std::ostream& info);
int cmd_simulate(const ScenarioConfig& cfg, const CommandOptions& opts, std::ostream& data,
                 std::ostream& info);
int cmd_sweep(GridSpec grid, const CommandOptions& opts, std::ostream& data, std::ostream& info);
int cmd_verify(VerifySpec spec, const CommandOptions& opts, std::ostream& data, std::ostream& info);

// Per-step CSV header written by `simulate`.
inline constexpr std::string_view kTrajectoryCsvHeader =
    "step,da,ds,proceeds,i_applied,h_before,h_after,ltv_before,ltv_after,lambda_before,"
    "price_after,s_after,q_after,liquidator_profit,toxic";

inline constexpr std::string_view kFrontierCsvHeader =
    "model,c,ltv,health,policy,lambda,frontier_constant,frontier_dynamic,frontier_effective,"
    "boundary_safe_lltv,verdict,dh_per_da";

}  // namespace liqtox
