#include "cli.hpp"

#include "uqbench/budget.hpp"
#include "uqbench/calibration.hpp"
#include "uqbench/discrepancy.hpp"
#include "uqbench/emit.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/estimators.hpp"
#include "uqbench/integrands.hpp"
#include "uqbench/kernel.hpp"
#include "uqbench/xustein.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace uqbench::cli {

namespace {

using nlohmann::json;

struct Common {
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string format = "json";
    std::string out = "-";
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--seed", c.seed, "master seed (all randomness derives from it)")->capture_default_str();
    app->add_option("--workers", c.workers, "replicate worker threads (output does not depend on it)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}))
        ->capture_default_str();
    app->add_option("--format", c.format, "json, csv or svg")->capture_default_str();
    app->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();
}

// Integrand selection. Parameter flags map onto registry parameter names.
struct FnOpts {
    std::string fn;
    std::size_t d = 1;
    std::map<std::string, std::optional<double>> params{{"c", {}},     {"p", {}},     {"gamma", {}},
                                                        {"alpha", {}}, {"eps", {}},   {"beta", {}},
                                                        {"scale", {}}, {"seed", {}},  {"modes", {}}};

    Params given() const
    {
        Params p;
        for (const auto& [k, v] : params)
            if (v) p[k] = *v;
        return p;
    }
    Integrand build() const { return registry_get(fn, d, given()); }
};

void add_fn(CLI::App* app, FnOpts& f, bool required)
{
    auto* o = app->add_option("--fn", f.fn, "integrand name (see list-integrands)");
    if (required) o->required();
    app->add_option("--d", f.d, "dimension")->check(CLI::Range(std::size_t{1}, std::size_t{50}))->capture_default_str();
    for (auto& [k, v] : f.params) {
        const std::string flag = k == "seed" ? "--fn-seed" : "--" + k;
        app->add_option(flag, v, "integrand parameter '" + k + "'");
    }
}

struct KernelOpts {
    std::string family = "squared_exponential";
    std::vector<double> lengthscale{0.5};
    double scale = 1.0;
    double nugget = 1e-10;
    std::vector<double> gamma{1.0};
    std::string kernel_json;

    Kernel build(std::size_t d) const
    {
        Kernel k;
        if (!kernel_json.empty()) {
            json j;
            try {
                j = json::parse(kernel_json);
            } catch (const json::exception& e) {
                throw ValidationError(std::string("--kernel-json is not valid JSON: ") + e.what());
            }
            k = kernel_from_json(j);
        } else {
            k.family = parse_kernel_family(family);
            k.lengthscale = lengthscale;
            k.scale = scale;
            k.nugget = nugget;
            k.gamma = gamma;
        }
        k.validate(d);
        return k;
    }
};

void add_kernel(CLI::App* app, KernelOpts& k)
{
    auto* fam = app->add_option("--kernel", k.family,
                                "squared_exponential, matern_half, brownian or bernoulli_lattice")
                    ->capture_default_str();
    auto* ls = app->add_option("--lengthscale", k.lengthscale, "one shared or d per-dimension lengthscales")
                   ->delimiter(',')
                   ->capture_default_str();
    auto* sc = app->add_option("--kernel-scale", k.scale, "kernel scale sigma^2")->capture_default_str();
    auto* ng = app->add_option("--nugget", k.nugget, "nugget relative to the scale")->capture_default_str();
    auto* gm = app->add_option("--kernel-gamma", k.gamma, "bernoulli_lattice weights")->delimiter(',')->capture_default_str();
    app->add_option("--kernel-json", k.kernel_json, "kernel as JSON {family, lengthscale, scale, nugget, gamma}")
        ->excludes(fam)
        ->excludes(ls)
        ->excludes(sc)
        ->excludes(ng)
        ->excludes(gm);
}

struct MethodOpts {
    std::string method = "mc";
    std::size_t n = 1000;
    std::size_t m = kDefaultRqmcReplicates;
    std::string rule = "sobol+digital_shift";
    std::size_t B = kDefaultBootstrapB;
    std::string solver = "auto";
    std::string eb = "off";
    std::string residual = "mc";
    std::size_t residual_n = 1000;
    std::size_t residual_m = 16;
    std::vector<double> grid;
};

void add_method(CLI::App* app, MethodOpts& m)
{
    app->add_option("--method", m.method, "mc, mc_bootstrap, rqmc, bc or cv")->capture_default_str();
    app->add_option("--n", m.n, "sample size / points per replicate / design size")->capture_default_str();
    app->add_option("--m", m.m, "RQMC replicates")->capture_default_str();
    app->add_option("--rule", m.rule, "sobol+digital_shift, sobol+nested_scramble or lattice+shift_mod1")
        ->capture_default_str();
    app->add_option("--B", m.B, "bootstrap resamples")->capture_default_str();
    app->add_option("--solver", m.solver, "BC solver: auto, dense or circulant")->capture_default_str();
    app->add_option("--eb", m.eb, "BC hyperparameters: off, scale or scale+lengthscale")->capture_default_str();
    app->add_option("--residual", m.residual, "CV residual sampler: mc or rqmc")->capture_default_str();
    app->add_option("--residual-n", m.residual_n, "CV residual MC size, or RQMC points per replicate")
        ->capture_default_str();
    app->add_option("--residual-m", m.residual_m, "CV residual RQMC replicates")->capture_default_str();
    app->add_option("--lengthscale-grid", m.grid, "lengthscale grid for profiling")->delimiter(',');
}

MethodConfig build_method(const MethodOpts& o, const KernelOpts& k, std::size_t d, const CLI::App* app)
{
    MethodConfig c;
    c.method = parse_method(o.method);
    c.n = o.n;
    c.m = o.m;
    c.rule = parse_rqmc_rule(o.rule);
    c.bootstrap_B = o.B;
    c.solver = parse_bc_solver(o.solver);
    c.eb = parse_eb_mode(o.eb);
    c.lengthscale_grid = o.grid;
    if (o.residual == "mc")
        c.residual.kind = ResidualSampler::Kind::mc;
    else if (o.residual == "rqmc")
        c.residual.kind = ResidualSampler::Kind::rqmc;
    else
        throw ValidationError("--residual must be mc or rqmc, got '" + o.residual + "'");
    c.residual.N = o.residual_n;
    c.residual.n = o.residual_n;
    c.residual.m = o.residual_m;
    c.residual.rule = c.rule;

    // Flags that only make sense for some methods are rejected elsewhere.
    auto given = [app](const char* flag) { return app->count(flag) > 0; };
    auto only = [&](const char* flag, bool ok, const char* what) {
        if (given(flag) && !ok) throw ValidationError(std::string(flag) + " applies to " + what + " only");
    };
    const bool gp = c.method == Method::bc || c.method == Method::cv;
    only("--m", c.method == Method::rqmc, "--method rqmc");
    only("--B", c.method == Method::mc_bootstrap, "--method mc_bootstrap");
    only("--rule", c.method == Method::rqmc || gp, "rqmc, bc and cv");
    only("--solver", c.method == Method::bc, "--method bc");
    only("--eb", c.method == Method::bc, "--method bc");
    only("--lengthscale-grid", c.method == Method::bc, "--method bc");
    for (const char* f : {"--residual", "--residual-n", "--residual-m"}) only(f, c.method == Method::cv, "--method cv");
    for (const char* f : {"--kernel", "--lengthscale", "--kernel-scale", "--nugget", "--kernel-gamma", "--kernel-json"})
        only(f, gp, "bc and cv");
    if (gp) c.kernel = k.build(d);
    c.validate(d);
    return c;
}

std::vector<double> parse_levels(const std::vector<double>& given, const std::vector<double>& fallback)
{
    const std::vector<double>& v = given.empty() ? fallback : given;
    for (double l : v)
        if (!(l > 0.0 && l < 1.0)) throw ValidationError("--level/--levels values must lie in (0, 1)");
    return v;
}

json integrand_entry(const Integrand& f, const RegistryEntry& e)
{
    json j;
    j["name"] = f.name;
    j["d"] = f.dim;
    j["exact_mean"] = f.exact_mean ? json(*f.exact_mean) : json(nullptr);
    j["tags"] = std::vector<std::string>(f.tags.begin(), f.tags.end());
    j["variance_finite"] = f.variance_finite;
    j["hk_variation"] = f.hk_variation ? json(*f.hk_variation) : json(nullptr);
    j["params"] = f.params;
    j["summary"] = e.summary;
    return j;
}

Format checked_format(const Common& c, std::initializer_list<Format> allowed, const char* what)
{
    const Format f = parse_format(c.format);
    for (Format a : allowed)
        if (a == f) return f;
    throw ValidationError("--format " + c.format + " is not available for " + what);
}

} // namespace

int run(int argc, const char* const* argv)
{
    CLI::App app{"uqbench: uncertainty quantification benchmarks for integration on [0,1]^d"};
    app.require_subcommand(1);
    app.fallthrough(false);

    // estimate
    Common est_c;
    FnOpts est_f;
    KernelOpts est_k;
    MethodOpts est_m;
    std::vector<double> est_levels;
    auto* est = app.add_subcommand("estimate", "one estimate with intervals");
    add_common(est, est_c);
    add_fn(est, est_f, true);
    add_kernel(est, est_k);
    add_method(est, est_m);
    est->add_option("--level", est_levels, "interval levels (default 0.99)")->delimiter(',');

    // calibrate
    Common cal_c;
    FnOpts cal_f;
    KernelOpts cal_k;
    MethodOpts cal_m;
    std::vector<double> cal_levels;
    std::size_t cal_R = 1000;
    auto* cal = app.add_subcommand("calibrate", "coverage versus nominal level");
    add_common(cal, cal_c);
    add_fn(cal, cal_f, true);
    add_kernel(cal, cal_k);
    add_method(cal, cal_m);
    cal->add_option("--levels", cal_levels, "nominal levels (default 0.2,0.4,0.6,0.8,0.95,0.99)")->delimiter(',');
    cal->add_option("--reps", cal_R, "replicates R")->capture_default_str();

    // prior-matched
    Common pm_c;
    KernelOpts pm_k;
    std::size_t pm_n = 16, pm_d = 2, pm_R = 2000;
    std::string pm_design = "sobol", pm_solver = "auto";
    std::vector<double> pm_levels;
    auto* pm = app.add_subcommand("prior-matched", "BC coverage on draws from its own prior");
    add_common(pm, pm_c);
    add_kernel(pm, pm_k);
    pm->add_option("--n", pm_n, "design size")->capture_default_str();
    pm->add_option("--d", pm_d, "dimension")->check(CLI::Range(std::size_t{1}, std::size_t{50}))->capture_default_str();
    pm->add_option("--design", pm_design, "sobol (first n points) or lattice (CBC rank-1)")->capture_default_str();
    pm->add_option("--solver", pm_solver, "auto, dense or circulant")->capture_default_str();
    pm->add_option("--levels", pm_levels, "nominal levels")->delimiter(',');
    pm->add_option("--reps", pm_R, "replicates R")->capture_default_str();

    // compare
    Common cmp_c;
    FnOpts cmp_f;
    KernelOpts cmp_k;
    std::string cmp_preset = "eta-cubed";
    double cmp_eta = 1e-3, cmp_budget = 2048, cmp_cf = 1.0, cmp_clin = 3e-3;
    std::size_t cmp_R = 100, cmp_m = 16, cmp_cv_n = 16;
    std::vector<std::string> cmp_methods{"mc", "rqmc", "bc", "bc_circulant"};
    std::string cmp_eb = "scale";
    auto* cmp = app.add_subcommand("compare", "methods at equal modeled cost");
    add_common(cmp, cmp_c);
    add_fn(cmp, cmp_f, true);
    add_kernel(cmp, cmp_k);
    cmp->add_option("--preset", cmp_preset, "eta-cubed or none")->capture_default_str();
    cmp->add_option("--eta", cmp_eta, "linear-algebra cost per n^3, in evaluations")->capture_default_str();
    cmp->add_option("--budget", cmp_budget, "budget N in evaluations")->capture_default_str();
    cmp->add_option("--c-f", cmp_cf, "cost per evaluation (preset none)")->capture_default_str();
    cmp->add_option("--c-lin", cmp_clin, "cost per modeled flop (preset none)")->capture_default_str();
    cmp->add_option("--reps", cmp_R, "replicates R")->capture_default_str();
    cmp->add_option("--m", cmp_m, "RQMC replicates")->capture_default_str();
    cmp->add_option("--cv-n", cmp_cv_n, "control-variate design size")->capture_default_str();
    cmp->add_option("--eb", cmp_eb, "BC hyperparameters: off, scale or scale+lengthscale")->capture_default_str();
    cmp->add_option("--methods", cmp_methods, "mc, mc_bootstrap, rqmc, rqmc_lattice, bc, bc_circulant, cv")
        ->delimiter(',')
        ->capture_default_str();

    // xustein
    Common xs_c;
    std::vector<int> xs_p{0, 1, 2, 3};
    std::vector<std::size_t> xs_n{8, 12, 16, 24, 32, 48, 64};
    double xs_l = 0.5, xs_nugget = 1e-10;
    bool xs_profile = false;
    auto* xs = app.add_subcommand("xustein", "growth of the EB scale for f(x) = x^p at x_i = i/n");
    add_common(xs, xs_c);
    xs->add_option("--p", xs_p, "exponents")->delimiter(',')->capture_default_str();
    xs->add_option("--n", xs_n, "design sizes")->delimiter(',')->capture_default_str();
    xs->add_option("--lengthscale", xs_l, "squared-exponential lengthscale")->capture_default_str();
    xs->add_option("--nugget", xs_nugget, "nugget")->capture_default_str();
    xs->add_flag("--profile", xs_profile, "also report with the lengthscale profiled per n");

    // discrepancy
    Common dc_c;
    FnOpts dc_f;
    std::string dc_gen = "sobol", dc_rand = "none", dc_points_out;
    std::size_t dc_n = 64;
    std::vector<std::uint64_t> dc_gv;
    auto* dc = app.add_subcommand("discrepancy", "star discrepancy (d<=2) and the Koksma-Hlawka bound (d=1)");
    add_common(dc, dc_c);
    add_fn(dc, dc_f, false);
    dc->add_option("--generator", dc_gen, "iid, sobol or lattice")->capture_default_str();
    dc->add_option("--randomization", dc_rand, "none, shift_mod1, digital_shift or nested_scramble")
        ->capture_default_str();
    dc->add_option("--n", dc_n, "number of points")->capture_default_str();
    dc->add_option("--gen-vector", dc_gv, "lattice generating vector (default: CBC)")->delimiter(',');
    dc->add_option("--points-out", dc_points_out, "also write the point set as CSV");

    // list-integrands
    Common li_c;
    std::size_t li_d = 1;
    auto* li = app.add_subcommand("list-integrands", "registry listing");
    add_common(li, li_c);
    li->add_option("--d", li_d, "dimension")->check(CLI::Range(std::size_t{1}, std::size_t{50}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }

    try {
        if (est->parsed()) {
            const Integrand f = est_f.build();
            const MethodConfig cfg = build_method(est_m, est_k, f.dim, est);
            const Format fmt = checked_format(est_c, {Format::json, Format::csv}, "estimate (a scalar result)");
            const auto levels = parse_levels(est_levels, {0.99});
            const Estimate e = run_method(cfg, f, RngStream{est_c.seed, 0});
            write_artifact(est_c.out, render(e, levels, fmt));
        } else if (cal->parsed()) {
            const Integrand f = cal_f.build();
            const MethodConfig cfg = build_method(cal_m, cal_k, f.dim, cal);
            const Format fmt = parse_format(cal_c.format);
            const auto levels = parse_levels(cal_levels, default_levels());
            const CalibrationReport r = coverage_experiment(cfg, f, levels, cal_R, cal_c.seed, cal_c.workers);
            write_artifact(cal_c.out, render(r, fmt));
        } else if (pm->parsed()) {
            const Kernel k = pm_k.build(pm_d);
            const Format fmt = parse_format(pm_c.format);
            PointSet design;
            if (pm_design == "sobol")
                design = sobol_points(pm_n, pm_d);
            else if (pm_design == "lattice")
                design = lattice_points(pm_n, cbc_lattice_vector(pm_n, pm_d));
            else
                throw ValidationError("--design must be sobol or lattice, got '" + pm_design + "'");
            const auto levels = parse_levels(pm_levels, default_levels());
            const CalibrationReport r = prior_matched_coverage(k, design, levels, pm_R, pm_c.seed, pm_c.workers,
                                                               parse_bc_solver(pm_solver));
            write_artifact(pm_c.out, render(r, fmt));
        } else if (cmp->parsed()) {
            const Integrand f = cmp_f.build();
            const Format fmt = parse_format(cmp_c.format);
            BudgetModel b;
            b.budget_evals = cmp_budget;
            b.eta = cmp_eta;
            b.c_f = cmp_cf;
            b.c_lin = cmp_clin;
            if (cmp_preset == "eta-cubed")
                b.eta_preset = true;
            else if (cmp_preset == "none")
                b.eta_preset = false;
            else
                throw ValidationError("--preset must be eta-cubed or none, got '" + cmp_preset + "'");
            if (b.eta_preset && (cmp->count("--c-f") || cmp->count("--c-lin")))
                throw ValidationError("--c-f/--c-lin apply to --preset none only");
            const EbMode eb = parse_eb_mode(cmp_eb);
            std::vector<MethodConfig> methods;
            for (const std::string& name : cmp_methods) {
                MethodConfig c;
                if (name == "mc") {
                    c.method = Method::mc;
                } else if (name == "mc_bootstrap") {
                    c.method = Method::mc_bootstrap;
                } else if (name == "rqmc" || name == "rqmc_lattice") {
                    c.method = Method::rqmc;
                    c.m = cmp_m;
                    c.rule = name == "rqmc" ? RqmcRule::sobol_digital_shift : RqmcRule::lattice_shift;
                } else if (name == "bc") {
                    c.method = Method::bc;
                    c.kernel = cmp_k.build(f.dim);
                    c.solver = BcSolver::dense;
                    c.eb = eb;
                } else if (name == "bc_circulant") {
                    c.method = Method::bc;
                    c.kernel.family = KernelFamily::bernoulli_lattice;
                    c.kernel.gamma = cmp_k.gamma;
                    c.kernel.nugget = cmp_k.nugget;
                    c.rule = RqmcRule::lattice_shift;
                    c.solver = BcSolver::circulant;
                    c.eb = eb == EbMode::scale_and_lengthscale ? EbMode::scale : eb;
                } else if (name == "cv") {
                    c.method = Method::cv;
                    c.kernel = cmp_k.build(f.dim);
                    c.n = cmp_cv_n;
                } else {
                    throw ValidationError("--methods: unknown method '" + name + "'");
                }
                methods.push_back(c);
            }
            const ComparisonTable t = compare_at_budget(methods, f, b, cmp_R, cmp_c.seed, cmp_c.workers);
            write_artifact(cmp_c.out, render(t, fmt));
        } else if (xs->parsed()) {
            const Format fmt = parse_format(xs_c.format);
            auto reports = xu_stein_experiment(xs_p, xs_n, xs_l, xs_nugget, false);
            if (xs_profile) {
                auto prof = xu_stein_experiment(xs_p, xs_n, xs_l, xs_nugget, true);
                reports.insert(reports.end(), prof.begin(), prof.end());
            }
            write_artifact(xs_c.out, render(reports, fmt));
        } else if (dc->parsed()) {
            const Format fmt = checked_format(dc_c, {Format::json, Format::csv}, "discrepancy");
            const std::size_t d = dc_f.d;
            if (d > 2) throw ValidationError("--d must be 1 or 2 for discrepancy");
            PointSet ps;
            const RngStream stream{dc_c.seed, 0};
            if (dc_gen == "iid")
                ps = iid_points(dc_n, d, stream);
            else if (dc_gen == "sobol")
                ps = sobol_points(dc_n, d);
            else if (dc_gen == "lattice")
                ps = lattice_points(dc_n, dc_gv.empty() ? cbc_lattice_vector(dc_n, d) : dc_gv);
            else
                throw ValidationError("--generator must be iid, sobol or lattice, got '" + dc_gen + "'");
            const Randomization rz = parse_randomization(dc_rand);
            if (rz != Randomization::none) ps = randomize(ps, rz, stream.derive(1));
            for (const auto& w : ps.warnings) std::cerr << "warning: " << w << "\n";

            json j;
            j["kind"] = "discrepancy";
            j["generator"] = std::string(to_string(ps.generator));
            j["randomization"] = std::string(to_string(ps.randomization));
            j["n"] = ps.n;
            j["d"] = ps.d;
            j["seed"] = dc_c.seed;
            j["star_discrepancy"] = d == 1 ? star_discrepancy_1d(ps) : star_discrepancy_2d(ps);
            if (!dc_f.fn.empty()) {
                const Integrand f = dc_f.build();
                if (d != 1) throw ValidationError("--fn with discrepancy needs --d 1 (Koksma-Hlawka check)");
                const KoksmaHlawkaCheck kh = koksma_hlawka_check(f, ps);
                j["integrand"] = f.name;
                j["variation"] = kh.variation;
                j["bound"] = kh.bound;
                j["error"] = kh.error;
                j["bound_holds"] = kh.holds;
            }
            if (!dc_points_out.empty()) write_artifact(dc_points_out, to_csv(ps));
            if (fmt == Format::json) {
                write_artifact(dc_c.out, dump_json(j));
            } else {
                std::string head, row;
                for (auto it = j.begin(); it != j.end(); ++it) {
                    if (it.key() == "kind") continue;
                    head += (head.empty() ? "" : ",") + it.key();
                    const std::string v = it.value().is_string() ? it.value().get<std::string>()
                                                                 : dump_json(it.value());
                    row += (row.empty() ? "" : ",") + (v.back() == '\n' ? v.substr(0, v.size() - 1) : v);
                }
                write_artifact(dc_c.out, head + "\n" + row + "\n");
            }
        } else if (li->parsed()) {
            const Format fmt = checked_format(li_c, {Format::json, Format::csv}, "list-integrands");
            json arr = json::array();
            std::string csv = "name,d,exact_mean,tags\n";
            for (const auto& e : registry()) {
                Integrand f;
                try {
                    f = registry_get(e.name, li_d);
                } catch (const ValidationError&) {
                    continue; // not defined in this dimension
                }
                arr.push_back(integrand_entry(f, e));
                std::string tags;
                for (const auto& t : f.tags) tags += (tags.empty() ? "" : " ") + t;
                csv += f.name + "," + std::to_string(f.dim) + "," +
                       (f.exact_mean ? dump_json(json(*f.exact_mean)).substr(0, dump_json(json(*f.exact_mean)).size() - 1)
                                     : std::string()) +
                       "," + tags + "\n";
            }
            json j;
            j["kind"] = "integrands";
            j["integrands"] = arr;
            write_artifact(li_c.out, fmt == Format::json ? dump_json(j) : csv);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kOk;
}

} // namespace uqbench::cli
