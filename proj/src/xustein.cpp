#include "uqbench/xustein.hpp"

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"
#include "uqbench/gp.hpp"
#include "uqbench/kernel.hpp"
#include "uqbench/linalg.hpp"
#include "uqbench/stats.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace uqbench {

namespace {

PointSet grid_design(std::size_t n)
{
    PointSet ps;
    ps.n = n;
    ps.d = 1;
    ps.coords.resize(n);
    for (std::size_t i = 0; i < n; ++i) ps.coords[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return ps;
}

double condition_number(const Eigen::MatrixXd& K)
{
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

} // namespace

ScaleGrowthReport scale_growth(const std::function<double(double)>& f, int p, const std::vector<std::size_t>& n_list,
                               double lengthscale, double nugget, bool profile_lengthscale)
{
    if (n_list.size() < 4) throw ValidationError("the scale-growth fit needs at least 4 design sizes");
    if (!(lengthscale > 0.0)) throw ValidationError("lengthscale must be > 0");
    if (!(nugget >= 0.0)) throw ValidationError("nugget must be >= 0");

    ScaleGrowthReport rep;
    rep.p = p;
    rep.lengthscale = lengthscale;
    rep.nugget = nugget;
    rep.profiled = profile_lengthscale;
    rep.target_slope = static_cast<double>(p) - 0.5;

    Kernel k;
    k.family = KernelFamily::squared_exponential;
    k.lengthscale = {lengthscale};
    k.scale = 1.0;
    k.nugget = nugget;

    bool any_signal = false;
    for (std::size_t n : n_list) {
        if (n < 1) throw ValidationError("design sizes must be >= 1");
        const PointSet design = grid_design(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = f(design.coords[i]);
            if (!std::isfinite(y[i])) throw NumericalError("target is not finite at x=" + format_roundtrip(design.coords[i]));
            any_signal = any_signal || y[i] != 0.0;
        }
        if (!any_signal) continue;
        try {
            Kernel kn = k;
            double s2 = 0.0;
            if (profile_lengthscale) {
                const ProfileResult pr = profile_ml_lengthscale(design, y, k, default_lengthscale_grid());
                kn.lengthscale = {pr.lengthscale};
            }
            const Eigen::MatrixXd K0 = gram(kn, design);
            const SpdFactor fac(K0);
            s2 = eb_scale(y, fac);
            rep.ns.push_back(n);
            rep.sigma_hat.push_back(std::sqrt(s2));
            rep.lengthscales.push_back(kn.lengthscale[0]);
            rep.condition_number.push_back(condition_number(K0));
            rep.jitter.push_back(fac.jitter());
        } catch (const NumericalError& e) {
            rep.dropped.push_back("n=" + std::to_string(n) + ": " + e.what());
        }
    }
    if (!any_signal) throw ValidationError("zero signal: y is identically 0, so sigma_hat = 0 and no growth rate exists");
    if (rep.ns.size() < 4)
        throw NumericalError("only " + std::to_string(rep.ns.size()) + " design sizes survived factorization (need 4)");

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.ns.size(); ++i) {
        lx.push_back(std::log(static_cast<double>(rep.ns[i])));
        ly.push_back(std::log(rep.sigma_hat[i]));
    }
    rep.fitted_slope = ls_slope(lx, ly);
    rep.strictly_increasing = true;
    for (std::size_t i = 1; i < rep.sigma_hat.size(); ++i)
        rep.strictly_increasing = rep.strictly_increasing && rep.sigma_hat[i] > rep.sigma_hat[i - 1];
    return rep;
}

std::vector<ScaleGrowthReport> xu_stein_experiment(const std::vector<int>& p_list,
                                                   const std::vector<std::size_t>& n_list, double lengthscale,
                                                   double nugget, bool profile_lengthscale)
{
    if (p_list.empty()) throw ValidationError("at least one exponent p is required");
    std::vector<ScaleGrowthReport> out;
    for (int p : p_list) {
        if (p < 0 || p > 3) throw ValidationError("p must be in {0, 1, 2, 3}, got " + std::to_string(p));
        const auto f = [p](double x) { return std::pow(x, p); };
        out.push_back(scale_growth(f, p, n_list, lengthscale, nugget, profile_lengthscale));
    }
    return out;
}

} // namespace uqbench
