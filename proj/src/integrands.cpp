#include "uqbench/integrands.hpp"

#include "uqbench/errors.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace uqbench {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::map<std::string, std::string>& aliases()
{
    static const std::map<std::string, std::string> a{
        {"monomial_p", "monomial"}, {"heavy_tail_alpha", "heavy_tail"}, {"rare_event_eps", "rare_event"}};
    return a;
}

Params merged(const RegistryEntry& entry, const Params& given)
{
    Params p = entry.defaults;
    for (const auto& [key, value] : given) {
        if (!entry.defaults.contains(key))
            throw ValidationError("integrand '" + entry.name + "' has no parameter '" + key + "'");
        if (!std::isfinite(value)) throw ValidationError("integrand parameter '" + key + "' must be finite");
        p[key] = value;
    }
    return p;
}

double gp_draw_eval(const std::vector<double>& cos_coef, const std::vector<double>& sin_coef, double constant,
                    double x)
{
    // cos(k theta), sin(k theta) by rotation, re-anchored every 32 terms.
    const double theta = kTwoPi * x;
    const double c1 = std::cos(theta);
    const double s1 = std::sin(theta);
    double ck = 1.0, sk = 0.0;
    double acc = constant;
    for (std::size_t k = 1; k <= cos_coef.size(); ++k) {
        if (k % 32 == 0) {
            ck = std::cos(theta * static_cast<double>(k));
            sk = std::sin(theta * static_cast<double>(k));
        } else {
            const double c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = c;
        }
        acc += cos_coef[k - 1] * ck + sin_coef[k - 1] * sk;
    }
    return acc;
}

} // namespace

const std::vector<RegistryEntry>& registry()
{
    static const std::vector<RegistryEntry> entries{
        {"constant", "f(x) = c", {{"c", 1.0}}},
        {"monomial", "f(x) = x1^p, mean 1/(p+1)", {{"p", 2.0}}},
        {"product_linear", "f(x) = prod_j (1 + gamma (x_j - 1/2)), mean 1", {{"gamma", 0.5}}},
        {"oscillatory", "f(x) = sin(2 pi x1) + 1, mean 1", {}},
        {"heavy_tail", "f(x) = x1^(-alpha), mean 1/(1-alpha); infinite variance for alpha >= 1/2",
         {{"alpha", 0.75}}},
        {"rare_event", "f(x) = 1{x1 < eps}, mean eps", {{"eps", 0.001}}},
        {"exponential", "f(x) = exp(beta x1), mean (e^beta - 1)/beta", {{"beta", 1.0}}},
        {"gp_draw",
         "frozen sample path of the periodic B2 Gaussian process (d=1), truncated Fourier series",
         {{"gamma", 1.0}, {"scale", 1.0}, {"seed", 0.0}, {"modes", 1024.0}}},
    };
    return entries;
}

Integrand registry_get(std::string_view requested, std::size_t d, const Params& given)
{
    std::string name(requested);
    if (auto it = aliases().find(name); it != aliases().end()) name = it->second;
    const RegistryEntry* entry = nullptr;
    for (const auto& e : registry())
        if (e.name == name) entry = &e;
    if (entry == nullptr) throw ValidationError("unknown integrand '" + std::string(requested) + "'");
    if (d < 1) throw ValidationError("integrand dimension must be >= 1");

    const Params p = merged(*entry, given);
    Integrand f;
    f.name = name;
    f.dim = d;
    f.params = p;

    if (name == "constant") {
        const double c = p.at("c");
        f.eval = [c](std::span<const double>) { return c; };
        f.exact_mean = c;
        f.tags = {"smooth"};
        if (d == 1) f.hk_variation = 0.0;
    } else if (name == "monomial") {
        const double power = p.at("p");
        if (power < 0.0) throw ValidationError("monomial exponent p must be >= 0");
        f.eval = [power](std::span<const double> x) { return std::pow(x[0], power); };
        f.exact_mean = 1.0 / (power + 1.0);
        f.tags = {"monomial", "smooth"};
        if (d == 1) f.hk_variation = power > 0.0 ? 1.0 : 0.0;
    } else if (name == "product_linear") {
        const double gamma = p.at("gamma");
        if (std::abs(gamma) > 2.0) throw ValidationError("product_linear gamma must satisfy |gamma| <= 2");
        f.eval = [gamma](std::span<const double> x) {
            double v = 1.0;
            for (double xj : x) v *= 1.0 + gamma * (xj - 0.5);
            return v;
        };
        f.exact_mean = 1.0;
        f.tags = {"smooth"};
        if (d == 1) f.hk_variation = std::abs(gamma);
    } else if (name == "oscillatory") {
        f.eval = [](std::span<const double> x) { return std::sin(kTwoPi * x[0]) + 1.0; };
        f.exact_mean = 1.0;
        f.tags = {"smooth"};
        if (d == 1) f.hk_variation = 4.0;
    } else if (name == "heavy_tail") {
        const double alpha = p.at("alpha");
        if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("heavy_tail alpha must lie in (0, 1)");
        f.eval = [alpha](std::span<const double> x) { return std::pow(std::max(x[0], kSingularClip), -alpha); };
        f.exact_mean = 1.0 / (1.0 - alpha);
        f.variance_finite = alpha < 0.5;
        f.tags = {"heavy_tail"};
    } else if (name == "rare_event") {
        const double eps = p.at("eps");
        if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("rare_event eps must lie in (0, 1)");
        f.eval = [eps](std::span<const double> x) { return x[0] < eps ? 1.0 : 0.0; };
        f.exact_mean = eps;
        f.tags = {"rare_event"};
        if (d == 1) f.hk_variation = 1.0;
    } else if (name == "exponential") {
        const double beta = p.at("beta");
        f.eval = [beta](std::span<const double> x) { return std::exp(beta * x[0]); };
        f.exact_mean = beta == 0.0 ? 1.0 : std::expm1(beta) / beta;
        f.tags = {"smooth"};
        if (d == 1) f.hk_variation = std::abs(std::expm1(beta));
    } else if (name == "gp_draw") {
        if (d != 1) throw ValidationError("gp_draw is defined for d=1 only");
        const double gamma = p.at("gamma");
        const double scale = p.at("scale");
        const double seed = p.at("seed");
        const double modes = p.at("modes");
        if (!(gamma >= 0.0) || !(scale >= 0.0)) throw ValidationError("gp_draw gamma and scale must be >= 0");
        if (!(seed >= 0.0) || seed != std::floor(seed)) throw ValidationError("gp_draw seed must be a non-negative integer");
        if (!(modes >= 1.0 && modes <= 65536.0) || modes != std::floor(modes))
            throw ValidationError("gp_draw modes must be an integer in [1, 65536]");
        // Cov = scale * (1 + gamma * B2({x - y})), B2(t) = sum_k cos(2 pi k t) / (pi k)^2.
        Philox rng(RngStream{static_cast<std::uint64_t>(seed), 0});
        const double sd = std::sqrt(scale);
        const double constant = sd * rng.normal();
        auto cos_coef = std::make_shared<std::vector<double>>(static_cast<std::size_t>(modes));
        auto sin_coef = std::make_shared<std::vector<double>>(static_cast<std::size_t>(modes));
        for (std::size_t k = 1; k <= cos_coef->size(); ++k) {
            const double amp = sd * std::sqrt(gamma) / (std::numbers::pi * static_cast<double>(k));
            (*cos_coef)[k - 1] = amp * rng.normal();
            (*sin_coef)[k - 1] = amp * rng.normal();
        }
        f.eval = [cos_coef, sin_coef, constant](std::span<const double> x) {
            return gp_draw_eval(*cos_coef, *sin_coef, constant, x[0]);
        };
        f.exact_mean = constant;
        f.tags = {"gp_draw"};
    }
    return f;
}

} // namespace uqbench
