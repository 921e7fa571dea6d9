#include "liqtox/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace liqtox {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, std::string_view key) {
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    }
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError(join(path, key), "unknown key");
    }
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double d = j.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
}

double require_number(const json& obj, std::string_view key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError(join(path, key), "missing required field");
    return get_number(obj.at(std::string(key)), join(path, key));
}

std::optional<double> optional_number(const json& obj, std::string_view key,
                                      const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    return get_number(obj.at(std::string(key)), join(path, key));
}

std::uint64_t get_unsigned(const json& j, const std::string& path) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                   j.get<std::int64_t>() < 0)) {
        throw ConfigError(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

IncentiveKind parse_policy(const json& j, const std::string& path) {
    const auto s = get_string(j, path);
    if (s == "constant") return IncentiveKind::Constant;
    if (s == "health_linked") return IncentiveKind::HealthLinked;
    throw ConfigError(path, "expected \"constant\" or \"health_linked\", got \"" + s + "\"");
}

ModelKind parse_model(const json& j, const std::string& path) {
    const auto s = get_string(j, path);
    if (s == "cpamm") return ModelKind::CpAmm;
    if (s == "linear") return ModelKind::Linear;
    throw ConfigError(path, "expected \"cpamm\" or \"linear\", got \"" + s + "\"");
}

template <typename T, typename F>
std::vector<T> parse_list(const json& obj, std::string_view key, const std::string& path,
                          F&& parse_item) {
    const auto p = join(path, key);
    if (!obj.contains(key)) throw ConfigError(p, "missing required field");
    const auto& arr = obj.at(std::string(key));
    if (!arr.is_array()) throw ConfigError(p, "expected an array");
    if (arr.empty()) throw ConfigError(p, "must not be empty");
    std::vector<T> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        out.push_back(parse_item(arr[k], p + "[" + std::to_string(k) + "]"));
    }
    return out;
}

void check(bool ok, const std::string& path, const char* message) {
    if (!ok) throw ConfigError(path, message);
}

}  // namespace

// ----------------------------------------------------------------------------
// Scenario
// ----------------------------------------------------------------------------

ScenarioConfig scenario_from_json(const json& j) {
    expect_object(j, "");
    reject_unknown(j, "", {"market", "position", "params", "policy", "step_rule", "max_steps", "seed"});

    ScenarioConfig cfg{};

    if (!j.contains("market")) throw ConfigError("market", "missing required field");
    const auto& m = j.at("market");
    expect_object(m, "market");
    if (m.size() != 1) throw ConfigError("market", "expected exactly one of \"cpamm\" or \"linear\"");
    if (m.contains("cpamm")) {
        const auto& c = m.at("cpamm");
        expect_object(c, "market.cpamm");
        reject_unknown(c, "market.cpamm", {"x", "y"});
        CpAmmConfig pool{require_number(c, "x", "market.cpamm"),
                         require_number(c, "y", "market.cpamm")};
        check(pool.x > 0.0, "market.cpamm.x", "must be > 0");
        check(pool.y > 0.0, "market.cpamm.y", "must be > 0");
        cfg.market = pool;
    } else if (m.contains("linear")) {
        const auto& l = m.at("linear");
        expect_object(l, "market.linear");
        reject_unknown(l, "market.linear", {"gamma", "sigma", "L"});
        LinearConfig lin{require_number(l, "gamma", "market.linear"),
                         require_number(l, "sigma", "market.linear"),
                         require_number(l, "L", "market.linear")};
        check(lin.gamma >= 0.0 && lin.gamma < 1.0, "market.linear.gamma", "must lie in [0, 1)");
        check(lin.sigma >= 0.0, "market.linear.sigma", "must be >= 0");
        check(lin.liquidity > 0.0, "market.linear.L", "must be > 0");
        cfg.market = lin;
    } else {
        throw ConfigError("market", "expected \"cpamm\" or \"linear\"");
    }

    if (!j.contains("position")) throw ConfigError("position", "missing required field");
    const auto& p = j.at("position");
    expect_object(p, "position");
    reject_unknown(p, "position", {"s", "q", "price"});
    cfg.position.s = require_number(p, "s", "position");
    cfg.position.q = require_number(p, "q", "position");
    cfg.position.price = optional_number(p, "price", "position");
    check(cfg.position.s >= 0.0, "position.s", "must be >= 0");
    check(cfg.position.q >= 0.0, "position.q", "must be >= 0");
    if (cfg.position.price) {
        check(*cfg.position.price > 0.0, "position.price", "must be > 0");
    }
    if (const auto* pool = std::get_if<CpAmmConfig>(&cfg.market); pool && cfg.position.price) {
        const double spot = pool->y / pool->x;
        check(std::abs(*cfg.position.price - spot) <= 1e-9 * spot, "position.price",
              "must equal the pool spot price y/x");
    }
    if (std::holds_alternative<LinearConfig>(cfg.market) && !cfg.position.price) {
        throw ConfigError("position.price", "required for the linear market model");
    }

    if (!j.contains("params")) throw ConfigError("params", "missing required field");
    const auto& r = j.at("params");
    expect_object(r, "params");
    reject_unknown(r, "params", {"v", "i_max"});
    cfg.v = require_number(r, "v", "params");
    cfg.i_max = require_number(r, "i_max", "params");
    check(cfg.v > 0.0 && cfg.v < 1.0, "params.v", "must lie in (0, 1)");
    check(cfg.i_max >= 0.0, "params.i_max", "must be >= 0");

    if (j.contains("policy")) cfg.policy = parse_policy(j.at("policy"), "policy");

    if (j.contains("step_rule")) {
        const auto& s = j.at("step_rule");
        expect_object(s, "step_rule");
        if (s.size() != 1) throw ConfigError("step_rule", "expected exactly one of \"fraction\" or \"amount\"");
        if (s.contains("fraction")) {
            const double eta = get_number(s.at("fraction"), "step_rule.fraction");
            check(eta > 0.0 && eta <= 1.0, "step_rule.fraction", "must lie in (0, 1]");
            cfg.step_rule = StepRule::fixed_fraction(eta);
        } else if (s.contains("amount")) {
            const double amount = get_number(s.at("amount"), "step_rule.amount");
            check(amount > 0.0, "step_rule.amount", "must be > 0");
            cfg.step_rule = StepRule::fixed_amount(amount);
        } else {
            throw ConfigError("step_rule", "expected \"fraction\" or \"amount\"");
        }
    }
    if (j.contains("max_steps")) {
        cfg.max_steps = get_unsigned(j.at("max_steps"), "max_steps");
        check(cfg.max_steps >= 1, "max_steps", "must be >= 1");
    }
    if (j.contains("seed")) cfg.seed = get_unsigned(j.at("seed"), "seed");
    return cfg;
}

json to_json(const ScenarioConfig& cfg) {
    json j;
    if (const auto* pool = std::get_if<CpAmmConfig>(&cfg.market)) {
        j["market"] = {{"cpamm", {{"x", pool->x}, {"y", pool->y}}}};
    } else {
        const auto& lin = std::get<LinearConfig>(cfg.market);
        j["market"] = {{"linear", {{"gamma", lin.gamma}, {"sigma", lin.sigma}, {"L", lin.liquidity}}}};
    }
    j["position"] = {{"s", cfg.position.s}, {"q", cfg.position.q}};
    if (cfg.position.price) j["position"]["price"] = *cfg.position.price;
    j["params"] = {{"v", cfg.v}, {"i_max", cfg.i_max}};
    j["policy"] = std::string(to_string(cfg.policy));
    if (cfg.step_rule.kind == StepRule::Kind::FixedFraction) {
        j["step_rule"] = {{"fraction", cfg.step_rule.value}};
    } else {
        j["step_rule"] = {{"amount", cfg.step_rule.value}};
    }
    j["max_steps"] = cfg.max_steps;
    j["seed"] = cfg.seed;
    return j;
}

Market ScenarioConfig::build_market() const {
    if (const auto* pool = std::get_if<CpAmmConfig>(&market)) {
        return CpAmmPool(pool->x, pool->y);
    }
    const auto& lin = std::get<LinearConfig>(market);
    return LinearMarket{LinearImpactModel(lin.gamma, lin.sigma, lin.liquidity), *position.price};
}

Position ScenarioConfig::build_position() const {
    return Position{position.s, position.q, market_price(build_market())};
}

RiskParams ScenarioConfig::build_params() const { return RiskParams(v, i_max); }

// ----------------------------------------------------------------------------
// Sweep grid
// ----------------------------------------------------------------------------

GridSpec grid_from_json(const json& j) {
    expect_object(j, "");
    reject_unknown(j, "", {"axes", "collateral", "price", "eta", "tol", "seed", "step_fraction",
                           "max_steps", "spiral_ltv_span", "linear_gamma", "threads"});
    if (!j.contains("axes")) throw ConfigError("axes", "missing required field");
    const auto& a = j.at("axes");
    expect_object(a, "axes");
    reject_unknown(a, "axes", {"model", "v", "i_max", "depth_ratio", "policy"});

    const auto number = [](const json& item, const std::string& p) { return get_number(item, p); };
    GridSpec g;
    if (a.contains("model")) g.models = parse_list<ModelKind>(a, "model", "axes", parse_model);
    g.lltvs = parse_list<double>(a, "v", "axes", number);
    g.bonuses = parse_list<double>(a, "i_max", "axes", number);
    g.depth_ratios = parse_list<double>(a, "depth_ratio", "axes", number);
    if (a.contains("policy")) g.policies = parse_list<IncentiveKind>(a, "policy", "axes", parse_policy);

    if (auto d = optional_number(j, "collateral", "")) g.collateral_units = *d;
    if (auto d = optional_number(j, "price", "")) g.price = *d;
    if (auto d = optional_number(j, "eta", "")) g.eta = *d;
    if (auto d = optional_number(j, "tol", "")) g.tol = *d;
    if (j.contains("seed")) g.seed = get_unsigned(j.at("seed"), "seed");
    if (auto d = optional_number(j, "step_fraction", "")) g.step_fraction = *d;
    if (j.contains("max_steps")) g.max_steps = get_unsigned(j.at("max_steps"), "max_steps");
    if (auto d = optional_number(j, "spiral_ltv_span", "")) g.spiral_ltv_span = *d;
    if (auto d = optional_number(j, "linear_gamma", "")) g.linear_gamma = *d;
    if (j.contains("threads")) g.threads = static_cast<unsigned>(get_unsigned(j.at("threads"), "threads"));

    check(g.collateral_units > 0.0, "collateral", "must be > 0");
    check(g.price > 0.0, "price", "must be > 0");
    check(g.eta > 0.0 && g.eta < 1.0, "eta", "must lie in (0, 1)");
    check(g.tol > 0.0, "tol", "must be > 0");
    check(g.step_fraction > 0.0 && g.step_fraction <= 1.0, "step_fraction", "must lie in (0, 1]");
    check(g.max_steps >= 1, "max_steps", "must be >= 1");
    check(g.spiral_ltv_span > 0.0, "spiral_ltv_span", "must be > 0");
    check(g.linear_gamma >= 0.0 && g.linear_gamma < 1.0, "linear_gamma", "must lie in [0, 1)");
    return g;
}

json to_json(const GridSpec& g) {
    json models = json::array(), policies = json::array();
    for (auto m : g.models) models.push_back(std::string(to_string(m)));
    for (auto p : g.policies) policies.push_back(std::string(to_string(p)));
    return {
        {"axes",
         {{"model", models},
          {"v", g.lltvs},
          {"i_max", g.bonuses},
          {"depth_ratio", g.depth_ratios},
          {"policy", policies}}},
        {"collateral", g.collateral_units},
        {"price", g.price},
        {"eta", g.eta},
        {"tol", g.tol},
        {"seed", g.seed},
        {"step_fraction", g.step_fraction},
        {"max_steps", g.max_steps},
        {"spiral_ltv_span", g.spiral_ltv_span},
        {"linear_gamma", g.linear_gamma},
        {"threads", g.threads},
    };
}

// ----------------------------------------------------------------------------
// Verify
// ----------------------------------------------------------------------------

VerifySpec verify_from_json(const json& j) {
    expect_object(j, "");
    reject_unknown(j, "", {"seed", "sign_samples", "swap_samples", "eta", "tol", "collateral",
                           "lambdas", "bonuses", "lltvs", "frontier_tol", "boundary_band",
                           "sign_band", "perturb_lambda"});
    const auto number = [](const json& item, const std::string& p) { return get_number(item, p); };
    VerifySpec s;
    if (j.contains("seed")) s.seed = get_unsigned(j.at("seed"), "seed");
    if (j.contains("sign_samples")) s.sign_samples = get_unsigned(j.at("sign_samples"), "sign_samples");
    if (j.contains("swap_samples")) s.swap_samples = get_unsigned(j.at("swap_samples"), "swap_samples");
    if (auto d = optional_number(j, "eta", "")) s.eta = *d;
    if (auto d = optional_number(j, "tol", "")) s.tol = *d;
    if (auto d = optional_number(j, "collateral", "")) s.collateral_units = *d;
    if (j.contains("lambdas")) s.lambdas = parse_list<double>(j, "lambdas", "", number);
    if (j.contains("bonuses")) s.bonuses = parse_list<double>(j, "bonuses", "", number);
    if (j.contains("lltvs")) s.lltvs = parse_list<double>(j, "lltvs", "", number);
    if (auto d = optional_number(j, "frontier_tol", "")) s.frontier_tol = *d;
    if (auto d = optional_number(j, "boundary_band", "")) s.boundary_band = *d;
    if (auto d = optional_number(j, "sign_band", "")) s.sign_band = *d;
    if (auto d = optional_number(j, "perturb_lambda", "")) s.perturb_lambda = *d;

    check(s.sign_samples >= 1, "sign_samples", "must be >= 1");
    check(s.swap_samples >= 1, "swap_samples", "must be >= 1");
    check(s.eta > 0.0 && s.eta < 1.0, "eta", "must lie in (0, 1)");
    check(s.tol > 0.0, "tol", "must be > 0");
    check(s.collateral_units > 0.0, "collateral", "must be > 0");
    for (std::size_t k = 0; k < s.lambdas.size(); ++k) {
        check(s.lambdas[k] >= 1.0, "lambdas[" + std::to_string(k) + "]", "must be >= 1");
    }
    for (std::size_t k = 0; k < s.bonuses.size(); ++k) {
        check(s.bonuses[k] >= 0.0, "bonuses[" + std::to_string(k) + "]", "must be >= 0");
    }
    for (std::size_t k = 0; k < s.lltvs.size(); ++k) {
        check(s.lltvs[k] > 0.0 && s.lltvs[k] < 1.0, "lltvs[" + std::to_string(k) + "]",
              "must lie in (0, 1)");
    }
    return s;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("JSON syntax error: ") + e.what());
    }
}

}  // namespace liqtox
