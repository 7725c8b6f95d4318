#include "uqbench/estimators.hpp"

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"
#include "uqbench/gp.hpp"
#include "uqbench/linalg.hpp"
#include "uqbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace uqbench {

namespace {

// Tags for child streams; any fixed distinct values work.
constexpr std::uint64_t kTagBootstrap = 0xB0075;
constexpr std::uint64_t kTagResidual = 0xC0DE;
constexpr std::uint64_t kTagReplicateBase = 0x5EED0000;

void check_level(double level)
{
    if (!(level > 0.0 && level < 1.0))
        throw ValidationError("interval level must lie in (0, 1), got " + format_roundtrip(level));
}

std::string point_text(std::span<const double> x)
{
    std::string s = "(";
    for (std::size_t j = 0; j < x.size(); ++j) s += (j ? ", " : "") + format_roundtrip(x[j]);
    return s + ")";
}

Randomization randomization_of(RqmcRule r)
{
    switch (r) {
    case RqmcRule::sobol_digital_shift: return Randomization::digital_shift;
    case RqmcRule::sobol_nested_scramble: return Randomization::nested_scramble;
    case RqmcRule::lattice_shift: return Randomization::shift_mod1;
    }
    return Randomization::none;
}

// Neumaier summation of a_i * b_i, with the product rounding error recovered by fma.
double compensated_dot(std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0, comp = 0.0;
    auto add = [&](double t) {
        const double s = sum + t;
        comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
        sum = s;
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double p = a[i] * b[i];
        add(p);
        add(std::fma(a[i], b[i], -p));
    }
    return sum + comp;
}

} // namespace

std::string_view to_string(IntervalKind k)
{
    switch (k) {
    case IntervalKind::clt: return "clt";
    case IntervalKind::student_t: return "student_t";
    case IntervalKind::bootstrap_t: return "bootstrap_t";
    case IntervalKind::gaussian_posterior: return "gaussian_posterior";
    }
    return "?";
}

Interval Estimate::interval(double level) const
{
    check_level(level);
    const double upper_p = 0.5 + 0.5 * level;
    double lo_q = 0.0, hi_q = 0.0;
    switch (interval_kind) {
    case IntervalKind::clt:
    case IntervalKind::gaussian_posterior:
        hi_q = normal_quantile(upper_p);
        lo_q = -hi_q;
        break;
    case IntervalKind::student_t:
        hi_q = student_t_quantile(df, upper_p);
        lo_q = -hi_q;
        break;
    case IntervalKind::bootstrap_t:
        if (bootstrap_t.empty()) throw ValidationError("bootstrap-t estimate carries no t* sample");
        // The upper t* quantile sets the lower end point.
        lo_q = quantile_type7(bootstrap_t, 1.0 - upper_p);
        hi_q = quantile_type7(bootstrap_t, upper_p);
        return {mu_hat - hi_q * scale, mu_hat - lo_q * scale};
    }
    return {mu_hat + lo_q * scale, mu_hat + hi_q * scale};
}

std::vector<double> evaluate(const Integrand& f, const PointSet& ps)
{
    if (ps.d != f.dim)
        throw ValidationError("integrand '" + f.name + "' has d=" + std::to_string(f.dim) + " but the points have d=" +
                              std::to_string(ps.d));
    std::vector<double> y(ps.n);
    for (std::size_t i = 0; i < ps.n; ++i) {
        y[i] = f(ps.point(i));
        if (!std::isfinite(y[i]))
            throw NumericalError("integrand '" + f.name + "' returned " + format_roundtrip(y[i]) + " at x=" +
                                 point_text(ps.point(i)));
    }
    return y;
}

Estimate mc_estimate(const Integrand& f, std::size_t n, RngStream stream)
{
    if (n < 2) throw ValidationError("mc_estimate needs n >= 2");
    const PointSet ps = iid_points(n, f.dim, stream);
    const std::vector<double> y = evaluate(f, ps);
    RunningStats st;
    for (double v : y) st.push(v);

    Estimate e;
    e.method = "mc";
    e.mu_hat = st.mean();
    e.scale = std::sqrt(st.variance() / static_cast<double>(n));
    e.interval_kind = IntervalKind::clt;
    e.n_evals = n;
    e.diagnostics["sample_sd"] = std::sqrt(st.variance());
    return e;
}

std::vector<double> bootstrap_t_statistics(std::span<const double> values, std::size_t B, RngStream stream)
{
    const std::size_t n = values.size();
    if (n < 8) throw ValidationError("bootstrap-t needs at least 8 values");
    if (B < 200) throw ValidationError("bootstrap-t needs B >= 200");
    RunningStats base;
    for (double v : values) base.push(v);
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    Philox rng(stream);
    std::vector<double> t(B);
    for (std::size_t b = 0; b < B; ++b) {
        RunningStats st;
        for (std::size_t i = 0; i < n; ++i) st.push(values[rng.below(n)]);
        const double s = std::sqrt(st.variance());
        t[b] = s == 0.0 ? 0.0 : (st.mean() - base.mean()) / (s / sqrt_n);
    }
    std::sort(t.begin(), t.end());
    return t;
}

Interval bootstrap_t_interval(std::span<const double> values, double level, std::size_t B, RngStream stream)
{
    check_level(level);
    RunningStats st;
    for (double v : values) st.push(v);
    Estimate e;
    e.mu_hat = st.mean();
    e.scale = std::sqrt(st.variance() / static_cast<double>(values.size()));
    e.interval_kind = IntervalKind::bootstrap_t;
    e.bootstrap_t = bootstrap_t_statistics(values, B, stream);
    return e.interval(level);
}

Estimate mc_bootstrap_estimate(const Integrand& f, std::size_t n, std::size_t B, RngStream stream)
{
    if (n < 8) throw ValidationError("bootstrap-t needs n >= 8");
    const PointSet ps = iid_points(n, f.dim, stream);
    const std::vector<double> y = evaluate(f, ps);
    RunningStats st;
    for (double v : y) st.push(v);

    Estimate e;
    e.method = "mc_bootstrap";
    e.mu_hat = st.mean();
    e.scale = std::sqrt(st.variance() / static_cast<double>(n));
    e.interval_kind = IntervalKind::bootstrap_t;
    e.n_evals = n;
    e.bootstrap_t = bootstrap_t_statistics(y, B, stream.derive(kTagBootstrap));
    e.diagnostics["bootstrap_B"] = static_cast<double>(B);
    return e;
}

std::string_view to_string(RqmcRule r)
{
    switch (r) {
    case RqmcRule::sobol_digital_shift: return "sobol+digital_shift";
    case RqmcRule::sobol_nested_scramble: return "sobol+nested_scramble";
    case RqmcRule::lattice_shift: return "lattice+shift_mod1";
    }
    return "?";
}

RqmcRule parse_rqmc_rule(std::string_view name)
{
    for (auto r : {RqmcRule::sobol_digital_shift, RqmcRule::sobol_nested_scramble, RqmcRule::lattice_shift})
        if (name == to_string(r)) return r;
    if (name == "sobol" || name == "digital_shift") return RqmcRule::sobol_digital_shift;
    if (name == "scramble" || name == "nested_scramble") return RqmcRule::sobol_nested_scramble;
    if (name == "lattice" || name == "shift_mod1") return RqmcRule::lattice_shift;
    throw ValidationError("unknown RQMC rule '" + std::string(name) +
                          "' (expected sobol+digital_shift, sobol+nested_scramble or lattice+shift_mod1)");
}

PointSet rqmc_base_points(RqmcRule rule, std::size_t n, std::size_t d)
{
    if (rule == RqmcRule::lattice_shift) {
        const auto g = cbc_lattice_vector(n, d);
        return lattice_points(n, g);
    }
    return sobol_points(n, d);
}

Estimate rqmc_estimate(const Integrand& f, const PointSet& base, std::size_t m, RqmcRule rule, RngStream stream)
{
    if (m < 2) throw ValidationError("rqmc_estimate needs m >= 2");
    if (base.n < 1) throw ValidationError("rqmc_estimate needs n >= 1");
    const bool lattice_rule = rule == RqmcRule::lattice_shift;
    if (lattice_rule != (base.generator == Generator::lattice) || base.randomization != Randomization::none)
        throw ValidationError("RQMC rule " + std::string(to_string(rule)) + " does not match the base point set");

    Estimate e;
    e.method = "rqmc";
    e.replicate_values.resize(m);
    RunningStats st;
    for (std::size_t r = 0; r < m; ++r) {
        const PointSet ps = randomize(base, randomization_of(rule), stream.derive(kTagReplicateBase + r));
        const std::vector<double> y = evaluate(f, ps);
        double sum = 0.0;
        for (double v : y) sum += v;
        e.replicate_values[r] = sum / static_cast<double>(base.n);
        st.push(e.replicate_values[r]);
    }
    e.mu_hat = st.mean();
    e.scale = std::sqrt(st.variance() / static_cast<double>(m));
    e.interval_kind = IntervalKind::student_t;
    e.df = static_cast<double>(m - 1);
    e.n_evals = base.n * m;
    e.diagnostics["n"] = static_cast<double>(base.n);
    e.diagnostics["m"] = static_cast<double>(m);
    return e;
}

Estimate rqmc_estimate(const Integrand& f, std::size_t n, std::size_t m, RqmcRule rule, RngStream stream)
{
    return rqmc_estimate(f, rqmc_base_points(rule, n, f.dim), m, rule, stream);
}

std::string_view to_string(BcSolver s)
{
    switch (s) {
    case BcSolver::automatic: return "auto";
    case BcSolver::dense: return "dense";
    case BcSolver::circulant: return "circulant";
    }
    return "?";
}

BcSolver parse_bc_solver(std::string_view name)
{
    for (auto s : {BcSolver::automatic, BcSolver::dense, BcSolver::circulant})
        if (name == to_string(s)) return s;
    throw ValidationError("unknown solver '" + std::string(name) + "' (expected auto, dense or circulant)");
}

bool circulant_applicable(const PointSet& design, const Kernel& kernel)
{
    return kernel.family == KernelFamily::bernoulli_lattice && design.generator == Generator::lattice &&
           (design.randomization == Randomization::none || design.randomization == Randomization::shift_mod1) &&
           design.n >= 1;
}

Estimate bc_estimate(std::span<const double> y, const PointSet& design, const Kernel& kernel, BcSolver solver)
{
    const std::size_t n = design.n;
    if (n < 1) throw ValidationError("bc_estimate needs at least one design point");
    if (y.size() != n)
        throw ValidationError("bc_estimate: " + std::to_string(y.size()) + " values for " + std::to_string(n) +
                              " design points");
    kernel.validate(design.d);
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(y[i])) throw NumericalError("bc_estimate: non-finite value at design point " + std::to_string(i));

    const Kernel k0 = kernel.with_scale(1.0);
    const KernelMeans means = kernel_means(k0, design);

    if (solver == BcSolver::automatic) solver = circulant_applicable(design, kernel) ? BcSolver::circulant : BcSolver::dense;

    Estimate e;
    e.method = "bc";
    e.interval_kind = IntervalKind::gaussian_posterior;
    e.n_evals = n;
    std::vector<double> w(n);
    if (solver == BcSolver::circulant) {
        if (!circulant_applicable(design, kernel))
            throw ValidationError("circulant solver needs a (shifted) lattice design and the bernoulli_lattice kernel");
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = kernel_eval(k0, design.point(0), design.point(j));
        row[0] += k0.nugget;
        const CirculantSolveResult sol = circulant_solve(row, means.z);
        w = sol.solution;
        e.flops_linear = sol.flops_linear;
        e.diagnostics["floored_modes"] = static_cast<double>(sol.floored_modes);
        e.diagnostics["solver_circulant"] = 1.0;
    } else {
        const SpdFactor f(gram(k0, design));
        const Eigen::Map<const Eigen::VectorXd> z(means.z.data(), static_cast<Eigen::Index>(n));
        Eigen::VectorXd wv = f.solve(Eigen::VectorXd(z));
        e.flops_linear = dense_factor_flops(n) + triangular_solve_flops(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = wv[static_cast<Eigen::Index>(i)];
        e.diagnostics["jitter"] = f.jitter();
        e.diagnostics["solver_circulant"] = 0.0;
    }

    // z^T w is within O(1/n^2) of kbarbar on good designs, so the sums are
    // compensated to keep the difference accurate.
    const double mu = compensated_dot(w, y);
    const double var0 = means.kbarbar - compensated_dot(w, means.z);
    if (var0 < 0.0) e.diagnostics["posterior_var_unclamped"] = kernel.scale * var0;
    e.mu_hat = mu;
    e.scale = std::sqrt(kernel.scale * std::max(var0, 0.0));
    e.weights = std::move(w);
    return e;
}

Estimate cv_estimate(const Integrand& f, const PointSet& design, const Kernel& kernel, const ResidualSampler& sampler,
                     RngStream stream)
{
    const std::vector<double> y = evaluate(f, design);
    const GpInterpolant fit(design, y, kernel);

    Integrand residual;
    residual.name = f.name + "_residual";
    residual.dim = f.dim;
    residual.eval = [&f, &fit](std::span<const double> x) { return f(x) - fit(x); };

    const RngStream fresh = stream.derive(kTagResidual);
    Estimate term2;
    if (sampler.kind == ResidualSampler::Kind::mc) {
        term2 = mc_estimate(residual, sampler.N, fresh);
    } else {
        if (sampler.n * sampler.m < 2) throw ValidationError("RQMC residual sampler needs n*m >= 2");
        term2 = rqmc_estimate(residual, sampler.n, sampler.m, sampler.rule, fresh);
    }

    Estimate e = term2;
    e.method = "cv";
    e.mu_hat = fit.integral() + term2.mu_hat;
    e.n_evals = design.n + term2.n_evals;
    e.flops_linear = fit.flops_linear() + term2.flops_linear;
    e.diagnostics["term1"] = fit.integral();
    e.diagnostics["term2"] = term2.mu_hat;
    e.diagnostics["design_n"] = static_cast<double>(design.n);
    return e;
}

} // namespace uqbench
