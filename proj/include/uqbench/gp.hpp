#pragma once

#include "uqbench/kernel.hpp"
#include "uqbench/linalg.hpp"
#include "uqbench/points.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace uqbench {

/// Profile MLE of the kernel scale: y^T K0^{-1} y / n for the unit-scale Gram K0.
double eb_scale(std::span<const double> y, const Eigen::MatrixXd& K0);
double eb_scale(std::span<const double> y, const SpdFactor& K0);

/// `count` points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// 16 points log-spaced on [0.05, 2].
std::vector<double> default_lengthscale_grid();

struct ProfileResult {
    double lengthscale = 0.0;
    double scale = 0.0; // sigma_hat^2 at the chosen lengthscale
    double log_likelihood = 0.0;
    std::vector<double> grid;
    std::vector<double> grid_log_likelihood; // NaN where the factorization failed
    std::vector<double> grid_scale;
    std::size_t failures = 0;
};

/// Maximizes -(n/2) log sigma_hat^2(l) - (1/2) log det K0(l) over the grid.
/// `base` supplies family, nugget and (for bernoulli_lattice) gamma; its
/// lengthscale is replaced per grid point. Ties go to the smaller l.
ProfileResult profile_ml_lengthscale(const PointSet& design, std::span<const double> y, const Kernel& base,
                                     std::span<const double> grid);

/// Posterior mean function of a zero-mean GP fitted to (design, y).
class GpInterpolant {
public:
    GpInterpolant(const PointSet& design, std::span<const double> y, const Kernel& kernel);

    double operator()(std::span<const double> x) const;
    /// Exact integral over [0,1]^d: z^T K^{-1} y.
    double integral() const { return integral_; }
    const Eigen::VectorXd& coefficients() const { return alpha_; }
    double flops_linear() const { return flops_; }
    double jitter() const { return jitter_; }

private:
    PointSet design_;
    Kernel kernel_;
    Eigen::VectorXd alpha_;
    double integral_ = 0.0;
    double flops_ = 0.0;
    double jitter_ = 0.0;
};

} // namespace uqbench
