#include "uqbench/gp.hpp"

#include "uqbench/errors.hpp"
#include "uqbench/integrands.hpp"
#include "uqbench/rng.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <string>

namespace uqbench {

double eb_scale(std::span<const double> y, const SpdFactor& K0)
{
    if (y.size() != K0.size()) throw ValidationError("eb_scale: y and K0 sizes differ");
    if (y.empty()) throw ValidationError("eb_scale needs at least one observation");
    const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::VectorXd h = K0.half_solve(v);
    return h.squaredNorm() / static_cast<double>(y.size());
}

double eb_scale(std::span<const double> y, const Eigen::MatrixXd& K0)
{
    return eb_scale(y, SpdFactor(K0));
}

std::vector<double> log_grid(double lo, double hi, std::size_t count)
{
    if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw ValidationError("log grid needs 0 < lo <= hi and count >= 1");
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_lengthscale_grid()
{
    return log_grid(0.05, 2.0, 16);
}

ProfileResult profile_ml_lengthscale(const PointSet& design, std::span<const double> y, const Kernel& base,
                                     std::span<const double> grid)
{
    if (grid.empty()) throw ValidationError("lengthscale grid is empty");
    if (y.size() != design.n) throw ValidationError("profile likelihood: y length does not match the design");
    if (base.family == KernelFamily::brownian || base.family == KernelFamily::bernoulli_lattice)
        throw ValidationError("lengthscale profiling needs a family with a lengthscale");
    const double n = static_cast<double>(design.n);

    ProfileResult r;
    r.grid.assign(grid.begin(), grid.end());
    r.grid_log_likelihood.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    r.grid_scale.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    bool found = false;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        Kernel k = base.with_scale(1.0);
        k.lengthscale = {grid[g]};
        try {
            const SpdFactor f(gram(k, design));
            const double s2 = eb_scale(y, f);
            r.grid_scale[g] = s2;
            // log(0) for y == 0 gives +inf; all such points tie and the smallest l wins.
            const double ll = -0.5 * n * std::log(s2) - 0.5 * f.log_det();
            r.grid_log_likelihood[g] = ll;
            if (!found || ll > r.log_likelihood ||
                (ll == r.log_likelihood && grid[g] < r.lengthscale)) {
                found = true;
                r.log_likelihood = ll;
                r.lengthscale = grid[g];
                r.scale = s2;
            }
        } catch (const NumericalError&) {
            ++r.failures;
        }
    }
    if (!found) throw NumericalError("profile likelihood: every grid lengthscale failed to factorize");
    return r;
}

GpInterpolant::GpInterpolant(const PointSet& design, std::span<const double> y, const Kernel& kernel)
    : design_(design), kernel_(kernel.with_scale(1.0))
{
    if (y.size() != design.n) throw ValidationError("interpolant: y length does not match the design");
    kernel_.validate(design.d);
    const SpdFactor f(gram(kernel_, design_));
    const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
    alpha_ = f.solve(Eigen::VectorXd(v));
    jitter_ = f.jitter();
    flops_ = dense_factor_flops(design.n) + triangular_solve_flops(design.n);
    const KernelMeans m = kernel_means(kernel_, design_);
    integral_ = 0.0;
    for (std::size_t i = 0; i < design.n; ++i) integral_ += m.z[i] * alpha_[static_cast<Eigen::Index>(i)];
}

double GpInterpolant::operator()(std::span<const double> x) const
{
    double acc = 0.0;
    for (std::size_t i = 0; i < design_.n; ++i)
        acc += kernel_eval(kernel_, x, design_.point(i)) * alpha_[static_cast<Eigen::Index>(i)];
    return acc;
}

JointGpDraw gp_joint_draw(const PointSet& design, const Kernel& kernel, RngStream stream)
{
    kernel.validate(std::max<std::size_t>(design.d, 1));
    const std::size_t n = design.n;
    JointGpDraw out;
    out.design = design;
    out.kernel = kernel;
    out.y.assign(n, 0.0);
    if (kernel.scale == 0.0) return out;

    const KernelMeans m = kernel_means(kernel, design);
    Eigen::MatrixXd C(n + 1, n + 1);
    C.topLeftCorner(n, n) = gram(kernel, design);
    for (std::size_t i = 0; i < n; ++i) {
        C(i, n) = m.z[i];
        C(n, i) = m.z[i];
    }
    C(n, n) = m.kbarbar;

    Eigen::LLT<Eigen::MatrixXd> llt(C);
    const double mean_diag = n > 0 ? C.topLeftCorner(n, n).diagonal().mean() : 0.0;
    for (double t = 1e-10; llt.info() != Eigen::Success; t *= 10.0) {
        if (t > 1.0000001e-6 || n == 0)
            throw NumericalError("joint GP covariance of size " + std::to_string(n + 1) +
                                 " is not positive definite after nugget escalation to 1e-6");
        Eigen::MatrixXd Cj = C;
        out.jitter = t * mean_diag;
        Cj.topLeftCorner(n, n).diagonal().array() += out.jitter;
        llt.compute(Cj);
    }

    Philox rng(stream);
    Eigen::VectorXd xi(n + 1);
    for (Eigen::Index i = 0; i <= static_cast<Eigen::Index>(n); ++i) xi[i] = rng.normal();
    const Eigen::VectorXd v = llt.matrixL() * xi;
    for (std::size_t i = 0; i < n; ++i) out.y[i] = v[static_cast<Eigen::Index>(i)];
    out.mu_true = v[static_cast<Eigen::Index>(n)];
    return out;
}

} // namespace uqbench
