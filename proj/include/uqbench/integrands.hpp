#pragma once

#include "uqbench/kernel.hpp"
#include "uqbench/points.hpp"
#include "uqbench/rng.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uqbench {

using Params = std::map<std::string, double>;

/// Singular integrands clip x1 below this value to it.
inline constexpr double kSingularClip = 0x1.0p-53;

/// Test integrand over [0,1]^d with its known properties.
struct Integrand {
    std::string name;
    std::size_t dim = 1;
    std::function<double(std::span<const double>)> eval;
    std::optional<double> exact_mean;
    bool variance_finite = true;
    std::optional<double> hk_variation; // d = 1 only
    std::set<std::string> tags;
    Params params;

    double operator()(std::span<const double> x) const { return eval(x); }
};

struct RegistryEntry {
    std::string name;
    std::string summary;
    Params defaults;
};

/// All registered integrands with their parameter defaults.
const std::vector<RegistryEntry>& registry();

/// Configured integrand. Aliases `monomial_p`, `heavy_tail_alpha` and
/// `rare_event_eps` are accepted. Unknown names or parameters, and parameter
/// values outside their domain, throw ValidationError.
Integrand registry_get(std::string_view name, std::size_t d, const Params& params = {});

/// One draw (f(X), mu) from the joint Gaussian law of a GP and its integral.
struct JointGpDraw {
    std::vector<double> y;
    double mu_true = 0.0;
    PointSet design;
    Kernel kernel;
    double jitter = 0.0; // extra diagonal added to the f(X) block, if any
};

/// Samples (f(X), mu) jointly from [[K, z], [z^T, kbarbar]] through a
/// Cholesky factor. K already carries the kernel nugget; on failure an
/// extra jitter of 1e-10 * mean(diag K), escalated x10 up to 1e-6, is added
/// to the f(X) block only.
JointGpDraw gp_joint_draw(const PointSet& design, const Kernel& kernel, RngStream stream);

} // namespace uqbench
