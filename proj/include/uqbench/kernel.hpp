#pragma once

#include "uqbench/points.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <span>
#include <string_view>
#include <vector>

namespace uqbench {

enum class KernelFamily { squared_exponential, matern_half, brownian, bernoulli_lattice };

std::string_view to_string(KernelFamily f);
KernelFamily parse_kernel_family(std::string_view name);

/// Covariance kernel on [0,1]^d with product structure across dimensions.
///
/// `lengthscale` and `gamma` hold either one shared value or one value per
/// dimension. `nugget` is relative to `scale`: the Gram diagonal carries
/// scale * (1 + nugget) for stationary families.
struct Kernel {
    KernelFamily family = KernelFamily::squared_exponential;
    std::vector<double> lengthscale{1.0};
    double scale = 1.0;
    double nugget = 1e-10;
    std::vector<double> gamma{1.0};

    double lengthscale_at(std::size_t j) const { return lengthscale.size() == 1 ? lengthscale[0] : lengthscale[j]; }
    double gamma_at(std::size_t j) const { return gamma.size() == 1 ? gamma[0] : gamma[j]; }
    bool stationary() const { return family != KernelFamily::brownian; }

    /// Throws ValidationError when the parameters do not fit dimension d.
    void validate(std::size_t d) const;

    Kernel with_scale(double s) const
    {
        Kernel k = *this;
        k.scale = s;
        return k;
    }
};

/// {family, lengthscale, scale, nugget, gamma?}; unknown keys are rejected.
nlohmann::json to_json(const Kernel& k);
Kernel kernel_from_json(const nlohmann::json& j);

double kernel_eval(const Kernel& k, std::span<const double> x, std::span<const double> y);

/// Per-dimension factor of the kernel (without the scale).
double kernel_factor(const Kernel& k, std::size_t dim, double x, double y);

/// z_i = int k(x, x_i) dx and kbarbar = int int k(x, x') dx dx' for the
/// uniform measure on [0,1]^d.
struct KernelMeans {
    std::vector<double> z;
    double kbarbar = 0.0;
};

KernelMeans kernel_means(const Kernel& k, const PointSet& design);

/// Closed-form int_0^1 of the dimension-`dim` factor against y.
double kernel_mean_factor(const Kernel& k, std::size_t dim, double x);
/// Closed-form double integral of the dimension-`dim` factor.
double kernel_double_mean_factor(const Kernel& k, std::size_t dim);

/// Gram matrix with the nugget added on the diagonal (by index, so repeated
/// points still get it).
Eigen::MatrixXd gram(const Kernel& k, const PointSet& design);

} // namespace uqbench
