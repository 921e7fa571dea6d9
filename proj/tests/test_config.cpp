#include "liqtox/config.hpp"

#include <doctest.h>

using namespace liqtox;
using nlohmann::json;

namespace {

std::string error_path(auto&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

json base_scenario() {
    return json::parse(R"({
        "market": {"cpamm": {"x": 1000, "y": 1000}},
        "position": {"s": 100, "q": 95},
        "params": {"v": 0.8, "i_max": 0.05},
        "policy": "health_linked",
        "step_rule": {"fraction": 0.02},
        "max_steps": 5000,
        "seed": 3
    })");
}

}  // namespace

TEST_CASE("scenario round trip") {
    const auto cfg = scenario_from_json(base_scenario());
    CHECK(cfg.v == 0.8);
    CHECK(cfg.policy == IncentiveKind::HealthLinked);
    CHECK(cfg.step_rule.value == 0.02);
    CHECK(cfg.max_steps == 5000);
    CHECK(cfg.build_position().mark_price == 1.0);
    CHECK(scenario_from_json(to_json(cfg)) == cfg);

    auto lin = json::parse(R"({
        "market": {"linear": {"gamma": 0.01, "sigma": 0.5, "L": 1000}},
        "position": {"s": 100, "q": 95, "price": 2},
        "params": {"v": 0.8, "i_max": 0.05},
        "step_rule": {"amount": 1.5}
    })");
    const auto lcfg = scenario_from_json(lin);
    CHECK(lcfg.policy == IncentiveKind::Constant);
    CHECK(lcfg.step_rule.kind == StepRule::Kind::FixedAmount);
    CHECK(scenario_from_json(to_json(lcfg)) == lcfg);
    CHECK(market_price(lcfg.build_market()) == 2.0);
}

TEST_CASE("scenario errors name the offending field") {
    auto j = base_scenario();
    j["params"]["v"] = 1.0;
    CHECK(error_path([&] { scenario_from_json(j); }) == "params.v");

    j = base_scenario();
    j["params"]["extra"] = 1;
    CHECK(error_path([&] { scenario_from_json(j); }) == "params.extra");

    j = base_scenario();
    j["market"]["cpamm"]["x"] = -5;
    CHECK(error_path([&] { scenario_from_json(j); }) == "market.cpamm.x");

    j = base_scenario();
    j["position"]["price"] = 1.5;
    CHECK(error_path([&] { scenario_from_json(j); }) == "position.price");

    j = base_scenario();
    j["position"].erase("q");
    CHECK(error_path([&] { scenario_from_json(j); }) == "position.q");

    j = base_scenario();
    j["policy"] = "dynamic";
    CHECK(error_path([&] { scenario_from_json(j); }) == "policy");

    j = base_scenario();
    j["step_rule"] = {{"fraction", 0.0}};
    CHECK(error_path([&] { scenario_from_json(j); }) == "step_rule.fraction");

    j = base_scenario();
    j["max_steps"] = -1;
    CHECK(error_path([&] { scenario_from_json(j); }) == "max_steps");

    j = base_scenario();
    j["market"] = {{"linear", {{"gamma", 0.0}, {"sigma", 1.0}, {"L", 10.0}}}};
    CHECK(error_path([&] { scenario_from_json(j); }) == "position.price");

    CHECK(error_path([&] { scenario_from_json(json::array()); }) == "<root>");
}

TEST_CASE("grid round trip and errors") {
    const auto j = json::parse(R"({
        "axes": {"model": ["cpamm", "linear"], "v": [0.6, 0.8], "i_max": [0.05],
                 "depth_ratio": [10, 100], "policy": ["constant"]},
        "seed": 11, "threads": 2, "step_fraction": 0.05
    })");
    const auto g = grid_from_json(j);
    CHECK(g.cell_count() == 8);
    CHECK(g.seed == 11);
    CHECK(grid_from_json(to_json(g)) == g);

    auto bad = j;
    bad["axes"]["v"] = json::array();
    CHECK(error_path([&] { grid_from_json(bad); }) == "axes.v");
    bad = j;
    bad["axes"]["policy"] = {"constant", "bogus"};
    CHECK(error_path([&] { grid_from_json(bad); }) == "axes.policy[1]");
    bad = j;
    bad["axes"]["lambda"] = {1.2};
    CHECK(error_path([&] { grid_from_json(bad); }) == "axes.lambda");
    bad = j;
    bad["eta"] = 2.0;
    CHECK(error_path([&] { grid_from_json(bad); }) == "eta");
}

TEST_CASE("verify spec") {
    CHECK(verify_from_json(json::object()) == VerifySpec{});
    const auto s = verify_from_json(json::parse(R"({"seed": 9, "lambdas": [1.0, 1.3]})"));
    CHECK(s.seed == 9);
    CHECK(s.lambdas.size() == 2);
    CHECK(error_path([&] { verify_from_json(json::parse(R"({"lltvs": []})")); }) == "lltvs");
    CHECK(error_path([&] { verify_from_json(json::parse(R"({"lambdas": [0.9]})")); }) ==
          "lambdas[0]");
}

TEST_CASE("missing files are config errors") {
    CHECK_THROWS_AS(load_json_file("/nonexistent/liqtox.json"), ConfigError);
}
