#include "uqbench/calibration.hpp"

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"
#include "uqbench/gp.hpp"
#include "uqbench/linalg.hpp"
#include "uqbench/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

namespace uqbench {

namespace {

constexpr std::uint64_t kTagDesign = 0xD35160;

struct ReplicateOutcome {
    double mu_hat = 0.0;
    double target = 0.0;
    std::vector<Interval> intervals;
};

std::vector<double> checked_levels(const std::vector<double>& levels)
{
    if (levels.empty()) throw ValidationError("at least one level is required");
    std::vector<double> out(levels);
    for (double l : out)
        if (!(l > 0.0 && l < 1.0)) throw ValidationError("levels must lie in (0, 1), got " + format_roundtrip(l));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Randomization randomization_of(RqmcRule r)
{
    return r == RqmcRule::lattice_shift ? Randomization::shift_mod1
           : r == RqmcRule::sobol_nested_scramble ? Randomization::nested_scramble
                                                   : Randomization::digital_shift;
}

// y^T K0^{-1} y / n through the same solver path the estimate will use.
double fitted_scale(const std::vector<double>& y, const PointSet& design, const Kernel& k, BcSolver solver,
                    double& flops)
{
    const Kernel k0 = k.with_scale(1.0);
    const bool circ = solver == BcSolver::circulant ||
                      (solver == BcSolver::automatic && circulant_applicable(design, k0));
    if (circ) {
        std::vector<double> row(design.n);
        for (std::size_t j = 0; j < design.n; ++j) row[j] = kernel_eval(k0, design.point(0), design.point(j));
        row[0] += k0.nugget;
        const CirculantSolveResult sol = circulant_solve(row, y);
        flops += sol.flops_linear;
        double q = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) q += y[i] * sol.solution[i];
        return std::max(q, 0.0) / static_cast<double>(y.size());
    }
    flops += triangular_solve_flops(design.n);
    return eb_scale(y, gram(k0, design));
}

Estimate bc_with_eb(const MethodConfig& cfg, const std::vector<double>& y, const PointSet& design)
{
    Kernel k = cfg.kernel;
    double extra_flops = 0.0;
    std::optional<double> profiled;
    if (cfg.eb == EbMode::scale_and_lengthscale) {
        const std::vector<double> grid = cfg.lengthscale_grid.empty() ? default_lengthscale_grid() : cfg.lengthscale_grid;
        const ProfileResult pr = profile_ml_lengthscale(design, y, k, grid);
        k.lengthscale = {pr.lengthscale};
        k.scale = pr.scale;
        profiled = pr.lengthscale;
        extra_flops += static_cast<double>(grid.size()) *
                       (dense_factor_flops(design.n) + triangular_solve_flops(design.n));
    } else if (cfg.eb == EbMode::scale) {
        k.scale = fitted_scale(y, design, k, cfg.solver, extra_flops);
    }
    Estimate e = bc_estimate(y, design, k, cfg.solver);
    e.flops_linear += extra_flops;
    if (cfg.eb != EbMode::off) e.diagnostics["eb_scale"] = k.scale;
    if (profiled) e.diagnostics["eb_lengthscale"] = *profiled;
    return e;
}

PointSet base_points_for(const MethodConfig& cfg, std::size_t d)
{
    return rqmc_base_points(cfg.rule, cfg.n, d);
}

CalibrationReport aggregate(const std::vector<ReplicateOutcome>& outcomes, const std::vector<double>& levels)
{
    CalibrationReport rep;
    rep.R = outcomes.size();
    rep.levels = levels;
    rep.hits.assign(levels.size(), 0);
    rep.mean_width.assign(levels.size(), 0.0);
    double sq = 0.0;
    for (const auto& o : outcomes) {
        const double err = o.mu_hat - o.target;
        sq += err * err;
        for (std::size_t l = 0; l < levels.size(); ++l) {
            if (o.intervals[l].contains(o.target)) ++rep.hits[l];
            rep.mean_width[l] += o.intervals[l].width();
        }
    }
    const double R = static_cast<double>(rep.R);
    rep.rmse = rep.R ? std::sqrt(sq / R) : 0.0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        rep.coverage.push_back(static_cast<double>(rep.hits[l]) / R);
        rep.band.push_back(wilson_interval(rep.hits[l], rep.R));
        rep.mean_width[l] /= R;
    }
    return rep;
}

ReplicateOutcome outcome(const Estimate& e, double target, const std::vector<double>& levels)
{
    ReplicateOutcome o;
    o.mu_hat = e.mu_hat;
    o.target = target;
    o.intervals.reserve(levels.size());
    for (double l : levels) o.intervals.push_back(e.interval(l));
    return o;
}

} // namespace

const std::vector<double>& default_levels()
{
    static const std::vector<double> levels{0.2, 0.4, 0.6, 0.8, 0.95, 0.99};
    return levels;
}

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::mc: return "mc";
    case Method::mc_bootstrap: return "mc_bootstrap";
    case Method::rqmc: return "rqmc";
    case Method::bc: return "bc";
    case Method::cv: return "cv";
    }
    return "?";
}

Method parse_method(std::string_view name)
{
    for (auto m : {Method::mc, Method::mc_bootstrap, Method::rqmc, Method::bc, Method::cv})
        if (name == to_string(m)) return m;
    if (name == "bootstrap") return Method::mc_bootstrap;
    throw ValidationError("unknown method '" + std::string(name) + "' (expected mc, mc_bootstrap, rqmc, bc or cv)");
}

std::string_view to_string(EbMode m)
{
    switch (m) {
    case EbMode::off: return "off";
    case EbMode::scale: return "scale";
    case EbMode::scale_and_lengthscale: return "scale+lengthscale";
    }
    return "?";
}

EbMode parse_eb_mode(std::string_view name)
{
    for (auto m : {EbMode::off, EbMode::scale, EbMode::scale_and_lengthscale})
        if (name == to_string(m)) return m;
    if (name == "lengthscale" || name == "full") return EbMode::scale_and_lengthscale;
    throw ValidationError("unknown EB mode '" + std::string(name) + "' (expected off, scale or scale+lengthscale)");
}

std::string MethodConfig::label() const
{
    std::string s(to_string(method));
    switch (method) {
    case Method::mc: break;
    case Method::mc_bootstrap: s += "[B=" + std::to_string(bootstrap_B) + "]"; break;
    case Method::rqmc: s += "[" + std::string(to_string(rule)) + ",m=" + std::to_string(m) + "]"; break;
    case Method::bc:
        s += "[" + std::string(to_string(kernel.family)) + "," + std::string(to_string(solver)) + "," +
             std::string(to_string(rule)) + ",eb=" + std::string(to_string(eb)) + "]";
        break;
    case Method::cv:
        s += "[" + std::string(to_string(kernel.family)) + "," + std::string(to_string(rule)) + "," +
             (residual.kind == ResidualSampler::Kind::mc ? "mc N=" + std::to_string(residual.N)
                                                         : "rqmc n=" + std::to_string(residual.n) +
                                                               " m=" + std::to_string(residual.m)) +
             "]";
        break;
    }
    return s;
}

void MethodConfig::validate(std::size_t d) const
{
    switch (method) {
    case Method::mc:
        if (n < 2) throw ValidationError("mc needs n >= 2");
        break;
    case Method::mc_bootstrap:
        if (n < 8) throw ValidationError("bootstrap-t needs n >= 8");
        if (bootstrap_B < 200) throw ValidationError("bootstrap-t needs B >= 200");
        break;
    case Method::rqmc:
        if (n < 1) throw ValidationError("rqmc needs n >= 1");
        if (m < 2) throw ValidationError("rqmc needs m >= 2");
        break;
    case Method::bc:
    case Method::cv:
        if (n < 1) throw ValidationError("design size n must be >= 1");
        kernel.validate(d);
        if (method == Method::bc && solver == BcSolver::circulant &&
            (rule != RqmcRule::lattice_shift || kernel.family != KernelFamily::bernoulli_lattice))
            throw ValidationError("the circulant solver needs rule lattice+shift_mod1 and the bernoulli_lattice kernel");
        if (method == Method::bc && eb == EbMode::scale_and_lengthscale &&
            (kernel.family == KernelFamily::brownian || kernel.family == KernelFamily::bernoulli_lattice))
            throw ValidationError("lengthscale profiling needs squared_exponential or matern_half");
        if (method == Method::cv) {
            if (residual.kind == ResidualSampler::Kind::mc && residual.N < 2)
                throw ValidationError("residual MC needs N >= 2");
            if (residual.kind == ResidualSampler::Kind::rqmc && residual.m < 2)
                throw ValidationError("residual RQMC needs m >= 2");
        }
        break;
    }
}

DesignBuilder randomized_design(RqmcRule rule, std::size_t n, std::size_t d)
{
    auto base = std::make_shared<const PointSet>(rqmc_base_points(rule, n, d));
    const Randomization kind = randomization_of(rule);
    return [base, kind](std::size_t, RngStream stream) { return randomize(*base, kind, stream); };
}

Estimate run_method(const MethodConfig& cfg, const Integrand& f, RngStream stream, const PointSet* base)
{
    std::optional<PointSet> own;
    auto base_ref = [&]() -> const PointSet& {
        if (base != nullptr) return *base;
        if (!own) own = base_points_for(cfg, f.dim);
        return *own;
    };
    switch (cfg.method) {
    case Method::mc: return mc_estimate(f, cfg.n, stream);
    case Method::mc_bootstrap: return mc_bootstrap_estimate(f, cfg.n, cfg.bootstrap_B, stream);
    case Method::rqmc: return rqmc_estimate(f, base_ref(), cfg.m, cfg.rule, stream);
    case Method::bc: {
        const PointSet design = randomize(base_ref(), randomization_of(cfg.rule), stream.derive(kTagDesign));
        return bc_with_eb(cfg, evaluate(f, design), design);
    }
    case Method::cv: {
        const PointSet design = randomize(base_ref(), randomization_of(cfg.rule), stream.derive(kTagDesign));
        return cv_estimate(f, design, cfg.kernel, cfg.residual, stream);
    }
    }
    throw ValidationError("unknown method");
}

CalibrationReport coverage_experiment(const MethodConfig& cfg, const Integrand& f, const std::vector<double>& levels,
                                      std::size_t R, std::uint64_t master_seed, std::size_t workers)
{
    if (!f.exact_mean) throw ValidationError("integrand '" + f.name + "' has no exact mean to cover");
    if (R < 100) throw ValidationError("coverage experiments need R >= 100");
    const std::vector<double> lv = checked_levels(levels);
    cfg.validate(f.dim);
    std::optional<PointSet> base;
    if (cfg.method == Method::rqmc || cfg.method == Method::bc || cfg.method == Method::cv)
        base = base_points_for(cfg, f.dim);
    const double mu = *f.exact_mean;

    const auto outcomes = run_replicates(R, workers, [&](std::size_t r) {
        const Estimate e = run_method(cfg, f, RngStream{master_seed, r}, base ? &*base : nullptr);
        return outcome(e, mu, lv);
    });
    CalibrationReport rep = aggregate(outcomes, lv);
    rep.method = cfg.label();
    rep.integrand = f.name;
    rep.n = cfg.n;
    rep.master_seed = master_seed;
    return rep;
}

CalibrationReport prior_matched_coverage(const Kernel& kernel, const PointSet& design,
                                         const std::vector<double>& levels, std::size_t R,
                                         std::uint64_t master_seed, std::size_t workers, BcSolver solver)
{
    if (R < 1) throw ValidationError("R must be >= 1");
    const std::vector<double> lv = checked_levels(levels);
    kernel.validate(design.d);
    const auto outcomes = run_replicates(R, workers, [&](std::size_t r) {
        const JointGpDraw draw = gp_joint_draw(design, kernel, RngStream{master_seed, r});
        const Estimate e = bc_estimate(draw.y, design, kernel, solver);
        return outcome(e, draw.mu_true, lv);
    });
    CalibrationReport rep = aggregate(outcomes, lv);
    rep.method = "bc[" + std::string(to_string(kernel.family)) + ",prior-matched]";
    rep.integrand = "gp_prior_draw";
    rep.n = design.n;
    rep.master_seed = master_seed;
    return rep;
}

CalibrationReport misspecified_coverage(const MethodConfig& cfg, const IntegrandSource& source,
                                        const DesignBuilder& design, const std::vector<double>& levels,
                                        std::size_t R, std::uint64_t master_seed, std::size_t workers)
{
    if (cfg.method != Method::bc) throw ValidationError("misspecified coverage runs Bayesian cubature");
    if (R < 1) throw ValidationError("R must be >= 1");
    const std::vector<double> lv = checked_levels(levels);
    const Integrand probe = source(0);
    cfg.validate(probe.dim);

    const auto outcomes = run_replicates(R, workers, [&](std::size_t r) {
        const RngStream stream{master_seed, r};
        const Integrand f = r == 0 ? probe : source(r);
        if (!f.exact_mean) throw ValidationError("integrand '" + f.name + "' has no exact mean to cover");
        const PointSet ps = design(r, stream.derive(kTagDesign));
        const Estimate e = bc_with_eb(cfg, evaluate(f, ps), ps);
        return outcome(e, *f.exact_mean, lv);
    });
    CalibrationReport rep = aggregate(outcomes, lv);
    rep.method = cfg.label();
    rep.integrand = probe.name;
    rep.n = cfg.n;
    rep.master_seed = master_seed;
    return rep;
}

} // namespace uqbench
