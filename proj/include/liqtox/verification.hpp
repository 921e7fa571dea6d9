// Property suites run by `liqtox verify`: frontier agreement, boundary
// audit, oracle sign agreement, convergence order and swap exactness.
#pragma once

#include "liqtox/analysis.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace liqtox {

struct VerifySpec {
    std::uint64_t seed = 1;
    std::size_t sign_samples = 10'000;
    std::size_t swap_samples = 10'000;
    double eta = kDefaultEta;
    double tol = 1e-9;
    double collateral_units = 100.0;

    // Penalty factors for the frontier and boundary suites. lambda = 1 is
    // realised with a CP-AMM at y/c = 1e12.
    std::vector<double> lambdas{1.0, 1.1, 1.25, 1.5};
    std::vector<double> bonuses{0.0, 0.05, 0.1};
    std::vector<double> lltvs{0.6, 0.7, 0.8};

    double frontier_tol = 1e-5;
    double boundary_band = 0.005;
    double sign_band = 1e-3;

    // Relative perturbation applied to the analytic lambda; used to check the
    // suites are sensitive to a wrong penalty factor.
    double perturb_lambda = 0.0;

    friend bool operator==(const VerifySpec&, const VerifySpec&) = default;
};

struct PropertyResult {
    std::string name;
    bool passed;
    double measured;
    double threshold;
    std::string detail;
};

// Throws std::invalid_argument when a list axis is empty.
std::vector<PropertyResult> run_verification(const VerifySpec& spec);

// CP-AMM market realising lambda for collateral value c at the given price;
// lambda = 1 maps to a pool with y/c = 1e12.
Market market_for_lambda(double lambda, double c, double price);

}  // namespace liqtox
