#pragma once

#include "uqbench/estimators.hpp"
#include "uqbench/integrands.hpp"
#include "uqbench/kernel.hpp"
#include "uqbench/points.hpp"
#include "uqbench/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace uqbench {

/// {0.2, 0.4, 0.6, 0.8, 0.95, 0.99}.
const std::vector<double>& default_levels();

enum class Method { mc, mc_bootstrap, rqmc, bc, cv };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

/// How BC picks its hyperparameters on each replicate.
enum class EbMode { off, scale, scale_and_lengthscale };

std::string_view to_string(EbMode m);
EbMode parse_eb_mode(std::string_view name);

/// Everything needed to build one estimate. `n` is the MC sample size, the
/// RQMC points per replicate, or the BC/CV design size. BC and CV designs are
/// the `rule` point set randomized per replicate.
struct MethodConfig {
    Method method = Method::mc;
    std::size_t n = 1000;
    std::size_t m = kDefaultRqmcReplicates;
    RqmcRule rule = RqmcRule::sobol_digital_shift;
    std::size_t bootstrap_B = kDefaultBootstrapB;
    Kernel kernel;
    BcSolver solver = BcSolver::automatic;
    EbMode eb = EbMode::off;
    std::vector<double> lengthscale_grid; // empty: default_lengthscale_grid()
    ResidualSampler residual;

    /// Short description such as "rqmc[sobol+digital_shift,m=16]".
    std::string label() const;
    void validate(std::size_t d) const;
};

/// Point set for replicate r (randomness only from `stream`).
using DesignBuilder = std::function<PointSet(std::size_t r, RngStream stream)>;

/// Randomized copies of the rule's n-point set in dimension d.
DesignBuilder randomized_design(RqmcRule rule, std::size_t n, std::size_t d);

/// One estimate for replicate stream `stream`. `base` may carry the
/// precomputed unrandomized point set for RQMC/BC/CV (else it is built).
Estimate run_method(const MethodConfig& cfg, const Integrand& f, RngStream stream, const PointSet* base = nullptr);

struct CalibrationReport {
    std::string method;
    std::string integrand;
    std::size_t n = 0;
    std::size_t R = 0;
    std::uint64_t master_seed = 0;
    std::vector<double> levels;
    std::vector<double> coverage;
    std::vector<ProportionBand> band; // 95% Wilson interval per level
    std::vector<std::size_t> hits;
    std::vector<double> mean_width;
    double rmse = 0.0;
    std::map<std::string, double> diagnostics;
};

/// Coverage of f's exact mean by cfg's intervals over R replicates, replicate
/// r using stream (master_seed, r). Output does not depend on `workers`.
CalibrationReport coverage_experiment(const MethodConfig& cfg, const Integrand& f, const std::vector<double>& levels,
                                      std::size_t R, std::uint64_t master_seed, std::size_t workers = 1);

/// BC on draws (y, mu) from the GP prior itself; coverage should be nominal.
CalibrationReport prior_matched_coverage(const Kernel& kernel, const PointSet& design,
                                         const std::vector<double>& levels, std::size_t R,
                                         std::uint64_t master_seed, std::size_t workers = 1,
                                         BcSolver solver = BcSolver::automatic);

/// Integrand for replicate r; lets an experiment re-draw the target each time.
using IntegrandSource = std::function<Integrand(std::size_t r)>;

/// BC with empirical-Bayes hyperparameters fitted on each replicate's data,
/// covering the integrand's exact mean. `cfg` must have method bc.
CalibrationReport misspecified_coverage(const MethodConfig& cfg, const IntegrandSource& source,
                                        const DesignBuilder& design, const std::vector<double>& levels,
                                        std::size_t R, std::uint64_t master_seed, std::size_t workers = 1);

} // namespace uqbench
