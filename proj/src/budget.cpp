#include "uqbench/budget.hpp"

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"
#include "uqbench/linalg.hpp"
#include "uqbench/parallel.hpp"

#include <cmath>
#include <functional>
#include <optional>

namespace uqbench {

namespace {

bool uses_circulant(const MethodConfig& cfg)
{
    if (cfg.method != Method::bc) return false;
    if (cfg.solver == BcSolver::circulant) return true;
    return cfg.solver == BcSolver::automatic && cfg.rule == RqmcRule::lattice_shift &&
           cfg.kernel.family == KernelFamily::bernoulli_lattice;
}

// Leading-order flops the eta preset prices.
double leading_flops(const MethodConfig& cfg)
{
    const double n = static_cast<double>(cfg.n);
    if (uses_circulant(cfg)) return cfg.n < 2 ? 0.0 : 3.0 * 5.0 * n * std::log2(n);
    return n * n * n / 3.0;
}

double full_flops(const MethodConfig& cfg)
{
    if (uses_circulant(cfg)) return circulant_solve_flops(cfg.n);
    return dense_factor_flops(cfg.n) + triangular_solve_flops(cfg.n);
}

std::size_t evals_of(const MethodConfig& cfg)
{
    switch (cfg.method) {
    case Method::mc:
    case Method::mc_bootstrap:
    case Method::bc: return cfg.n;
    case Method::rqmc: return cfg.n * cfg.m;
    case Method::cv:
        return cfg.n + (cfg.residual.kind == ResidualSampler::Kind::mc ? cfg.residual.N
                                                                       : cfg.residual.n * cfg.residual.m);
    }
    return 0;
}

// Largest s with cost(s) <= target, then s or s+1, whichever is closer
// (ties to s). cost must be nondecreasing; returns 1 when even s=1 is over.
std::size_t fit_size(const std::function<double(std::size_t)>& cost, double target)
{
    std::size_t lo = 1;
    if (cost(lo) > target) return lo;
    std::size_t hi = 2;
    while (cost(hi) <= target) {
        lo = hi;
        if (hi > (std::size_t{1} << 40)) break;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (cost(mid) <= target ? lo : hi) = mid;
    }
    return std::abs(cost(lo + 1) - target) < std::abs(cost(lo) - target) ? lo + 1 : lo;
}

} // namespace

void BudgetModel::validate() const
{
    if (!(budget_evals >= 1.0) || !std::isfinite(budget_evals)) throw ValidationError("budget must be >= 1");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be > 0");
    if (!eta_preset && (!(c_f >= 0.0) || !(c_lin >= 0.0) || c_f + c_lin == 0.0))
        throw ValidationError("cost coefficients c_f, c_lin must be >= 0 and not both zero");
}

std::size_t equal_budget(double N, double eta)
{
    if (!(N >= 1.0) || !(eta > 0.0)) throw ValidationError("equal_budget needs N >= 1 and eta > 0");
    const double c = std::cbrt(N / eta);
    const auto base = static_cast<std::size_t>(std::floor(c));
    std::size_t best = 1;
    double best_gap = std::abs(eta - N);
    for (std::size_t n = base > 1 ? base - 1 : 1; n <= base + 2; ++n) {
        const double m = static_cast<double>(n);
        const double gap = std::abs(eta * m * m * m - N);
        if (gap < best_gap) {
            best_gap = gap;
            best = n;
        }
    }
    return best;
}

std::size_t nearest_power_of_two(std::size_t n)
{
    if (n <= 1) return 1;
    std::size_t lo = 1;
    while (lo * 2 <= n) lo *= 2;
    const std::size_t hi = lo * 2;
    return (n - lo) <= (hi - n) ? lo : hi;
}

double modeled_cost(const MethodConfig& cfg, const BudgetModel& b)
{
    const double evals = static_cast<double>(evals_of(cfg));
    const bool gp = cfg.method == Method::bc || cfg.method == Method::cv;
    if (b.eta_preset) {
        if (!gp) return evals;
        const double linear = 3.0 * b.eta * leading_flops(cfg);
        // CV still samples the residual, which costs evaluations.
        return cfg.method == Method::cv ? linear + evals : linear;
    }
    return evals * b.c_f + (gp ? full_flops(cfg) : 0.0) * b.c_lin;
}

ComparisonTable compare_at_budget(const std::vector<MethodConfig>& methods, const Integrand& f,
                                  const BudgetModel& budget, std::size_t R, std::uint64_t master_seed,
                                  std::size_t workers)
{
    budget.validate();
    if (methods.empty()) throw ValidationError("compare needs at least one method");
    if (R < 1) throw ValidationError("R must be >= 1");
    if (!f.exact_mean) throw ValidationError("integrand '" + f.name + "' has no exact mean");
    const double N = budget.budget_evals;

    ComparisonTable table;
    table.integrand = f.name;
    table.R = R;
    table.master_seed = master_seed;
    table.budget = budget;

    for (const MethodConfig& given : methods) {
        MethodConfig cfg = given;
        ComparisonRow row;
        row.method = cfg.method;

        if (cfg.method == Method::cv) {
            // Design size stays as configured; the residual sample absorbs the rest.
            auto cost = [&](std::size_t s) {
                MethodConfig c = cfg;
                if (c.residual.kind == ResidualSampler::Kind::mc)
                    c.residual.N = s;
                else
                    c.residual.n = s;
                return modeled_cost(c, budget);
            };
            const std::size_t s = fit_size(cost, N);
            if (cfg.residual.kind == ResidualSampler::Kind::mc)
                cfg.residual.N = s;
            else
                cfg.residual.n = s;
            row.m = cfg.residual.kind == ResidualSampler::Kind::mc ? s : s * cfg.residual.m;
        } else {
            auto cost = [&](std::size_t s) {
                MethodConfig c = cfg;
                c.n = s;
                return modeled_cost(c, budget);
            };
            cfg.n = fit_size(cost, N);
            if (cfg.method == Method::rqmc) row.m = cfg.m;
        }
        row.n = cfg.n;
        row.label = cfg.label();
        row.n_evals = evals_of(cfg);
        row.modeled_cost = modeled_cost(cfg, budget);

        const std::size_t size = cfg.method == Method::cv ? row.m : cfg.n;
        const std::size_t min_size = cfg.method == Method::mc_bootstrap ? 8 : 2;
        if (size < min_size || row.modeled_cost > 1.05 * N) {
            row.excluded = true;
            row.diagnostic = "cannot fit the budget of " + format_sig12(N) + " (modeled cost " +
                             format_sig12(row.modeled_cost) + " at size " + std::to_string(size) + ")";
            table.rows.push_back(row);
            continue;
        }
        if (std::abs(row.modeled_cost - N) > 0.05 * N)
            row.diagnostic = "modeled cost differs from the budget by more than 5%";
        try {
            cfg.validate(f.dim);
        } catch (const ValidationError& e) {
            row.excluded = true;
            row.diagnostic = e.what();
            table.rows.push_back(row);
            continue;
        }

        std::optional<PointSet> base;
        if (cfg.method == Method::rqmc || cfg.method == Method::bc || cfg.method == Method::cv)
            base = rqmc_base_points(cfg.rule, cfg.n, f.dim);
        struct Out {
            double err = 0.0, width = 0.0, flops = 0.0;
            bool covered = false;
        };
        const double mu = *f.exact_mean;
        const auto outs = run_replicates(R, workers, [&](std::size_t r) {
            const Estimate e = run_method(cfg, f, RngStream{master_seed, r}, base ? &*base : nullptr);
            const Interval iv = e.interval(0.99);
            return Out{e.mu_hat - mu, iv.width(), e.flops_linear, iv.contains(mu)};
        });
        double sq = 0.0, width = 0.0;
        std::size_t hits = 0;
        for (const Out& o : outs) {
            sq += o.err * o.err;
            width += o.width;
            hits += o.covered ? 1 : 0;
        }
        const double Rd = static_cast<double>(R);
        row.rmse = std::sqrt(sq / Rd);
        row.mean_width_99 = width / Rd;
        row.coverage_99 = static_cast<double>(hits) / Rd;
        row.flops_linear = outs.front().flops;
        table.rows.push_back(row);
    }
    return table;
}

} // namespace uqbench
