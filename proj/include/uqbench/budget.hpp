#pragma once

#include "uqbench/calibration.hpp"
#include "uqbench/integrands.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace uqbench {

/// Budget in units of one integrand evaluation.
///
/// With `eta_preset`, sampling methods pay one unit per evaluation and GP
/// methods pay eta per unit of n^3, i.e. c_lin = 3 eta per modeled flop of
/// the leading-order factorization term (n^3/3 dense, 15 n log2 n circulant).
/// Otherwise every method pays n_evals * c_f + flops_linear * c_lin.
struct BudgetModel {
    double budget_evals = 2048.0;
    double eta = 1e-3;
    bool eta_preset = true;
    double c_f = 1.0;
    double c_lin = 3e-3;

    void validate() const;
};

/// argmin over integers n >= 1 of |eta n^3 - N|, ties toward the smaller n.
std::size_t equal_budget(double N, double eta);

/// Power of two closest to n (ties toward the smaller one).
std::size_t nearest_power_of_two(std::size_t n);

struct ComparisonRow {
    std::string label;
    Method method = Method::mc;
    std::size_t n = 0;
    std::size_t m = 0;           // rqmc replicates or cv residual sample size
    std::size_t n_evals = 0;     // per replicate
    double flops_linear = 0.0;   // modeled, per replicate
    double modeled_cost = 0.0;
    double rmse = 0.0;
    double mean_width_99 = 0.0;
    double coverage_99 = 0.0;
    bool excluded = false;
    std::string diagnostic;
};

struct ComparisonTable {
    std::string integrand;
    std::size_t R = 0;
    std::uint64_t master_seed = 0;
    BudgetModel budget;
    std::vector<ComparisonRow> rows;
};

/// Modeled cost of one estimate from `cfg` with its current sizes.
double modeled_cost(const MethodConfig& cfg, const BudgetModel& budget);

/// Sizes each method so its modeled cost is as close to the budget as the
/// integer grid allows (ties toward lower cost), then runs R replicates.
/// Methods that cannot reach n >= 2 are kept as excluded rows.
ComparisonTable compare_at_budget(const std::vector<MethodConfig>& methods, const Integrand& f,
                                  const BudgetModel& budget, std::size_t R, std::uint64_t master_seed,
                                  std::size_t workers = 1);

} // namespace uqbench
