#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace uqbench {

/// Growth of the empirical-Bayes scale sigma_hat(n) for one target function
/// sampled at x_i = i/n, i = 1..n, under a squared-exponential kernel.
struct ScaleGrowthReport {
    int p = 0;
    double lengthscale = 0.0;
    double nugget = 0.0;
    bool profiled = false;                // lengthscale re-fitted per n
    std::vector<std::size_t> ns;          // surviving sizes
    std::vector<double> sigma_hat;
    std::vector<double> lengthscales;     // per n (constant unless profiled)
    std::vector<double> condition_number; // of the nugget-augmented K0
    std::vector<double> jitter;           // extra escalation jitter per n
    std::vector<std::string> dropped;     // "n=..: reason"
    double fitted_slope = 0.0;            // of log sigma_hat on log n
    double target_slope = 0.0;            // p - 1/2
    bool strictly_increasing = false;
};

/// Scale growth for f(x) = x^p. Sizes whose factorization fails are dropped
/// with a diagnostic; fewer than 4 survivors is an error, as is y == 0.
ScaleGrowthReport scale_growth(const std::function<double(double)>& f, int p, const std::vector<std::size_t>& n_list,
                               double lengthscale, double nugget, bool profile_lengthscale = false);

/// One report per p in p_list (each p in {0, 1, 2, 3}).
std::vector<ScaleGrowthReport> xu_stein_experiment(const std::vector<int>& p_list,
                                                   const std::vector<std::size_t>& n_list, double lengthscale,
                                                   double nugget, bool profile_lengthscale = false);

} // namespace uqbench
