// Scenario, sweep-grid and verify configuration files (JSON).
//
// Every loader validates the numeric constraints of the types it feeds and
// reports violations as ConfigError carrying the offending field path, e.g.
// "params.v" or "axes.policy[1]". Unknown keys are rejected.
#pragma once

#include "liqtox/engine.hpp"
#include "liqtox/lending.hpp"
#include "liqtox/market_impact.hpp"
#include "liqtox/sweep.hpp"
#include "liqtox/verification.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace liqtox {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct CpAmmConfig {
    double x;
    double y;
    friend bool operator==(const CpAmmConfig&, const CpAmmConfig&) = default;
};

struct LinearConfig {
    double gamma;
    double sigma;
    double liquidity;
    friend bool operator==(const LinearConfig&, const LinearConfig&) = default;
};

struct PositionConfig {
    double s;
    double q;
    // Optional for CP-AMM markets (defaults to pool spot, and must match it
    // when given); required for the linear model.
    std::optional<double> price;
    friend bool operator==(const PositionConfig&, const PositionConfig&) = default;
};

struct ScenarioConfig {
    std::variant<CpAmmConfig, LinearConfig> market;
    PositionConfig position;
    double v;
    double i_max;
    IncentiveKind policy = IncentiveKind::Constant;
    StepRule step_rule = StepRule::fixed_fraction(0.01);
    std::size_t max_steps = kDefaultMaxSteps;
    std::uint64_t seed = 0;

    Market build_market() const;
    Position build_position() const;
    RiskParams build_params() const;
    IncentivePolicy build_policy() const { return IncentivePolicy(policy, i_max); }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& config);

GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GridSpec& grid);

VerifySpec verify_from_json(const nlohmann::json& j);

// Reads and parses a JSON file; syntax errors become ConfigError("<file>").
nlohmann::json load_json_file(const std::string& path);

}  // namespace liqtox
