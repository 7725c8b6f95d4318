#pragma once

#include "uqbench/integrands.hpp"
#include "uqbench/kernel.hpp"
#include "uqbench/points.hpp"
#include "uqbench/rng.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uqbench {

enum class IntervalKind { clt, student_t, bootstrap_t, gaussian_posterior };

std::string_view to_string(IntervalKind k);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
};

/// mu_hat = sum_i w_i f(x_i) together with its uncertainty statement.
struct Estimate {
    std::string method;
    double mu_hat = 0.0;
    double scale = 0.0; // standard error, or posterior sd of mu
    IntervalKind interval_kind = IntervalKind::clt;
    double df = 0.0;    // student_t only
    std::size_t n_evals = 0;
    double flops_linear = 0.0;

    std::vector<double> weights;           // BC/CV design weights K^{-1} z
    std::vector<double> replicate_values;  // RQMC per-replicate averages
    std::vector<double> bootstrap_t;       // sorted t* (bootstrap_t only)
    std::map<std::string, double> diagnostics;

    /// Two-sided interval at the given level in (0, 1).
    Interval interval(double level) const;
};

/// Plain Monte Carlo on n iid points; scale = s / sqrt(n), CLT intervals.
Estimate mc_estimate(const Integrand& f, std::size_t n, RngStream stream);

inline constexpr std::size_t kDefaultBootstrapB = 1000;

/// Sorted studentized bootstrap statistics t* = (mu* - mu) / (s* / sqrt(n)).
/// A resample with s* = 0 contributes t* = 0.
std::vector<double> bootstrap_t_statistics(std::span<const double> values, std::size_t B, RngStream stream);

/// [mu - t*_{1-a/2} s/sqrt(n), mu - t*_{a/2} s/sqrt(n)] with type-7 quantiles.
Interval bootstrap_t_interval(std::span<const double> values, double level, std::size_t B, RngStream stream);

/// Monte Carlo on iid points with bootstrap-t intervals (B resamples drawn
/// from a stream derived from `stream`).
Estimate mc_bootstrap_estimate(const Integrand& f, std::size_t n, std::size_t B, RngStream stream);

enum class RqmcRule { sobol_digital_shift, sobol_nested_scramble, lattice_shift };

std::string_view to_string(RqmcRule r);
RqmcRule parse_rqmc_rule(std::string_view name);

inline constexpr std::size_t kDefaultRqmcReplicates = 25;

/// Unrandomized point set of the rule (Sobol prefix or CBC lattice).
PointSet rqmc_base_points(RqmcRule rule, std::size_t n, std::size_t d);

/// m independent randomizations of the rule's n-point set; Student-t(m-1)
/// interval on the replicate averages.
Estimate rqmc_estimate(const Integrand& f, std::size_t n, std::size_t m, RqmcRule rule, RngStream stream);
/// Same with a precomputed base point set (avoids rebuilding lattices).
Estimate rqmc_estimate(const Integrand& f, const PointSet& base, std::size_t m, RqmcRule rule, RngStream stream);

enum class BcSolver { automatic, dense, circulant };

std::string_view to_string(BcSolver s);
BcSolver parse_bc_solver(std::string_view name);

/// True when the Gram matrix is circulant in index order: an (optionally
/// shifted) rank-1 lattice with the bernoulli_lattice kernel.
bool circulant_applicable(const PointSet& design, const Kernel& kernel);

/// Bayesian cubature: mu_hat = z^T K^{-1} y, scale = sqrt(kbarbar - z^T K^{-1} z).
/// Works on the unit-scale Gram and multiplies the variance by kernel.scale.
Estimate bc_estimate(std::span<const double> y, const PointSet& design, const Kernel& kernel,
                     BcSolver solver = BcSolver::automatic);

/// Integrand values at every design point; NumericalError on non-finite output.
std::vector<double> evaluate(const Integrand& f, const PointSet& ps);

struct ResidualSampler {
    enum class Kind { mc, rqmc } kind = Kind::mc;
    std::size_t N = 1000;         // mc
    std::size_t n = 64;           // rqmc points per replicate
    std::size_t m = kDefaultRqmcReplicates;
    RqmcRule rule = RqmcRule::sobol_digital_shift;
};

/// Control variate f = f~ + (f - f~) with f~ the GP posterior mean on the
/// design. The residual is integrated at fresh points from a stream derived
/// from `stream`, never at the design points.
Estimate cv_estimate(const Integrand& f, const PointSet& design, const Kernel& kernel, const ResidualSampler& sampler,
                     RngStream stream);

} // namespace uqbench
