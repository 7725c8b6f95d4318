#include "uqbench/kernel.hpp"

#include "uqbench/errors.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace uqbench {

std::string_view to_string(KernelFamily f)
{
    switch (f) {
    case KernelFamily::squared_exponential: return "squared_exponential";
    case KernelFamily::matern_half: return "matern_half";
    case KernelFamily::brownian: return "brownian";
    case KernelFamily::bernoulli_lattice: return "bernoulli_lattice";
    }
    return "?";
}

KernelFamily parse_kernel_family(std::string_view name)
{
    for (auto f : {KernelFamily::squared_exponential, KernelFamily::matern_half, KernelFamily::brownian,
                   KernelFamily::bernoulli_lattice}) {
        if (name == to_string(f)) return f;
    }
    throw ValidationError("unknown kernel family '" + std::string(name) + "'");
}

void Kernel::validate(std::size_t d) const
{
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw ValidationError("kernel scale must be finite and >= 0");
    if (!(nugget >= 0.0) || !std::isfinite(nugget)) throw ValidationError("kernel nugget must be finite and >= 0");
    if (family == KernelFamily::brownian && d != 1)
        throw ValidationError("brownian kernel is defined for d=1 only");
    if (family == KernelFamily::squared_exponential || family == KernelFamily::matern_half) {
        if (lengthscale.size() != 1 && lengthscale.size() != d)
            throw ValidationError("lengthscale must have 1 or d entries");
        for (double l : lengthscale)
            if (!(l > 0.0) || !std::isfinite(l)) throw ValidationError("lengthscale must be positive");
    }
    if (family == KernelFamily::bernoulli_lattice) {
        if (gamma.size() != 1 && gamma.size() != d) throw ValidationError("gamma must have 1 or d entries");
        for (double g : gamma)
            if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("gamma must be >= 0");
    }
}

nlohmann::json to_json(const Kernel& k)
{
    nlohmann::json j;
    j["family"] = std::string(to_string(k.family));
    j["scale"] = k.scale;
    j["nugget"] = k.nugget;
    if (k.family == KernelFamily::squared_exponential || k.family == KernelFamily::matern_half)
        j["lengthscale"] = k.lengthscale.size() == 1 ? nlohmann::json(k.lengthscale[0]) : nlohmann::json(k.lengthscale);
    if (k.family == KernelFamily::bernoulli_lattice)
        j["gamma"] = k.gamma.size() == 1 ? nlohmann::json(k.gamma[0]) : nlohmann::json(k.gamma);
    return j;
}

namespace {

std::vector<double> number_or_list(const nlohmann::json& v, const char* key)
{
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array() && !v.empty()) {
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ValidationError(std::string("kernel '") + key + "' entries must be numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    throw ValidationError(std::string("kernel '") + key + "' must be a number or a non-empty list");
}

} // namespace

Kernel kernel_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw ValidationError("kernel spec must be a JSON object");
    static const std::set<std::string> known{"family", "lengthscale", "scale", "nugget", "gamma"};
    for (const auto& [key, value] : j.items())
        if (!known.contains(key)) throw ValidationError("unknown kernel key '" + key + "'");
    if (!j.contains("family") || !j["family"].is_string()) throw ValidationError("kernel spec needs a 'family' string");
    Kernel k;
    k.family = parse_kernel_family(j["family"].get<std::string>());
    if (j.contains("lengthscale")) k.lengthscale = number_or_list(j["lengthscale"], "lengthscale");
    if (j.contains("gamma")) k.gamma = number_or_list(j["gamma"], "gamma");
    if (j.contains("scale")) {
        if (!j["scale"].is_number()) throw ValidationError("kernel 'scale' must be a number");
        k.scale = j["scale"].get<double>();
    }
    if (j.contains("nugget")) {
        if (!j["nugget"].is_number()) throw ValidationError("kernel 'nugget' must be a number");
        k.nugget = j["nugget"].get<double>();
    }
    k.validate(std::max(k.lengthscale.size(), k.gamma.size()));
    return k;
}

double kernel_factor(const Kernel& k, std::size_t dim, double x, double y)
{
    switch (k.family) {
    case KernelFamily::squared_exponential: {
        const double l = k.lengthscale_at(dim);
        const double t = x - y;
        return std::exp(-t * t / (2.0 * l * l));
    }
    case KernelFamily::matern_half:
        return std::exp(-std::abs(x - y) / k.lengthscale_at(dim));
    case KernelFamily::brownian:
        return std::min(x, y);
    case KernelFamily::bernoulli_lattice: {
        const double t = (x - y) - std::floor(x - y);
        return 1.0 + k.gamma_at(dim) * (t * t - t + 1.0 / 6.0);
    }
    }
    return 0.0;
}

double kernel_eval(const Kernel& k, std::span<const double> x, std::span<const double> y)
{
    double v = k.scale;
    for (std::size_t j = 0; j < x.size(); ++j) v *= kernel_factor(k, j, x[j], y[j]);
    return v;
}

double kernel_mean_factor(const Kernel& k, std::size_t dim, double x)
{
    switch (k.family) {
    case KernelFamily::squared_exponential: {
        const double l = k.lengthscale_at(dim);
        const double s = std::numbers::sqrt2 * l;
        return l * std::sqrt(std::numbers::pi / 2.0) * (std::erf((1.0 - x) / s) + std::erf(x / s));
    }
    case KernelFamily::matern_half: {
        const double l = k.lengthscale_at(dim);
        return l * (2.0 - std::exp(-x / l) - std::exp(-(1.0 - x) / l));
    }
    case KernelFamily::brownian:
        return x - 0.5 * x * x;
    case KernelFamily::bernoulli_lattice:
        return 1.0;
    }
    return 0.0;
}

double kernel_double_mean_factor(const Kernel& k, std::size_t dim)
{
    switch (k.family) {
    case KernelFamily::squared_exponential: {
        const double l = k.lengthscale_at(dim);
        // 2 int_0^1 (1 - t) exp(-t^2 / (2 l^2)) dt
        return l * std::sqrt(2.0 * std::numbers::pi) * std::erf(1.0 / (std::numbers::sqrt2 * l)) +
               2.0 * l * l * std::expm1(-1.0 / (2.0 * l * l));
    }
    case KernelFamily::matern_half: {
        const double l = k.lengthscale_at(dim);
        return 2.0 * l * (1.0 + l * std::expm1(-1.0 / l));
    }
    case KernelFamily::brownian:
        return 1.0 / 3.0;
    case KernelFamily::bernoulli_lattice:
        return 1.0;
    }
    return 0.0;
}

KernelMeans kernel_means(const Kernel& k, const PointSet& design)
{
    k.validate(design.d);
    KernelMeans m;
    m.z.resize(design.n);
    for (std::size_t i = 0; i < design.n; ++i) {
        double v = k.scale;
        for (std::size_t j = 0; j < design.d; ++j) v *= kernel_mean_factor(k, j, design(i, j));
        m.z[i] = v;
    }
    m.kbarbar = k.scale;
    for (std::size_t j = 0; j < design.d; ++j) m.kbarbar *= kernel_double_mean_factor(k, j);
    return m;
}

Eigen::MatrixXd gram(const Kernel& k, const PointSet& design)
{
    k.validate(design.d);
    const auto n = static_cast<Eigen::Index>(design.n);
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = kernel_eval(k, design.point(i), design.point(i)) + k.nugget * k.scale;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = kernel_eval(k, design.point(i), design.point(j));
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

} // namespace uqbench
