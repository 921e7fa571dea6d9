// liqtox: liquidation-toxicity frontiers, spiral simulation, parameter
// sweeps and self-verification.
//
//   liqtox frontier --config scenario.json [--format csv|records] [--out f]
//   liqtox simulate --config scenario.json [--format csv|records] [--out f]
//   liqtox sweep    --config grid.json [--seed N] [--eta E] [--tol T] [--out f]
//   liqtox verify   [--config verify.json] [--seed N] [--eta E] [--tol T]
//
// Exit codes: 0 success, 1 verification failure, 2 configuration or usage
// error, 3 position not liquidatable, 4 simulation stopped by the market.

#include "liqtox/commands.hpp"
#include "liqtox/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

using namespace liqtox;

namespace {

struct Args {
    std::string config;
    std::string out;
    std::optional<double> eta;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<double> perturb_lambda;
    OutputFormat format = OutputFormat::Csv;
};

void add_common(CLI::App* sub, Args& a, bool config_required) {
    auto* cfg = sub->add_option("--config", a.config, "Configuration file (JSON)");
    if (config_required) cfg->required();
    cfg->check(CLI::ExistingFile);
    sub->add_option("--out", a.out, "Write output to this file instead of stdout");
    sub->add_option("--eta", a.eta, "Finite-difference step as a fraction of current debt")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--tol", a.tol, "Bisection bracket tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", a.seed, "Random seed");
    const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::Csv},
                                                      {"records", OutputFormat::Records}};
    sub->add_option("--format", a.format, "Output format: csv or records (JSON lines)")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slippage-aware liquidation toxicity toolkit"};
    app.require_subcommand(1);

    Args a;
    auto* frontier = app.add_subcommand("frontier", "Report penalty factor, frontiers and safe LLTV");
    auto* simulate = app.add_subcommand("simulate", "Run a liquidation spiral and write the trajectory");
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
    auto* verify = app.add_subcommand("verify", "Run the property suites; exit 0 iff all pass");
    add_common(frontier, a, true);
    add_common(simulate, a, true);
    add_common(sweep, a, true);
    add_common(verify, a, false);
    verify->add_option("--perturb-lambda", a.perturb_lambda,
                       "Relative perturbation of the analytic penalty factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfigError;
    }

    CommandOptions opts{a.eta, a.tol, a.seed, a.perturb_lambda, a.format};

    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open output file " << a.out << '\n';
            return kExitConfigError;
        }
    }
    std::ostream& data = a.out.empty() ? std::cout : file;
    // Keep stdout clean for data when it is the data stream.
    std::ostream& info = a.out.empty() ? std::cerr : std::cout;

    try {
        if (frontier->parsed()) {
            return cmd_frontier(scenario_from_json(load_json_file(a.config)), opts, data, info);
        }
        if (simulate->parsed()) {
            return cmd_simulate(scenario_from_json(load_json_file(a.config)), opts, data, info);
        }
        if (sweep->parsed()) {
            return cmd_sweep(grid_from_json(load_json_file(a.config)), opts, data, info);
        }
        VerifySpec spec = a.config.empty() ? VerifySpec{} : verify_from_json(load_json_file(a.config));
        return cmd_verify(spec, opts, data, info);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error at " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    }
}
