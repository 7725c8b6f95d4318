#include "uqbench/errors.hpp"
#include "uqbench/gp.hpp"
#include "uqbench/integrands.hpp"
#include "uqbench/kernel.hpp"
#include "uqbench/points.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace uqbench;

TEST_CASE("eb scale examples")
{
    const std::vector<double> zero(3, 0.0), y{1.0, 2.0, 2.0};
    CHECK(eb_scale(zero, Eigen::MatrixXd::Identity(3, 3)) == 0.0);
    CHECK(eb_scale(y, Eigen::MatrixXd::Identity(3, 3)) == Catch::Approx(3.0));
    Eigen::Matrix3d D = Eigen::Vector3d(1.0, 4.0, 0.5).asDiagonal();
    CHECK(eb_scale(y, D) == Catch::Approx((1.0 + 1.0 + 8.0) / 3));
}

TEST_CASE("lengthscale grid")
{
    const auto g = default_lengthscale_grid();
    REQUIRE(g.size() == 16);
    CHECK(g.front() == Catch::Approx(0.05));
    CHECK(g.back() == Catch::Approx(2.0));
    for (std::size_t i = 2; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == Catch::Approx(g[1] / g[0]));
}

TEST_CASE("profile with a one-point grid returns that point")
{
    const PointSet ps = sobol_points(8, 1);
    std::vector<double> y(8);
    for (std::size_t i = 0; i < 8; ++i) y[i] = std::sin(5 * ps(i, 0));
    const std::vector<double> grid{0.37};
    const auto r = profile_ml_lengthscale(ps, y, Kernel{}, grid);
    CHECK(r.lengthscale == 0.37);
    Kernel k;
    k.lengthscale = {0.37};
    CHECK(r.scale == Catch::Approx(eb_scale(y, gram(k, ps))).epsilon(1e-10));
}

TEST_CASE("constant data: fitted scale decreases with lengthscale")
{
    const PointSet ps = sobol_points(16, 2);
    const std::vector<double> y(16, 1.0);
    const auto grid = log_grid(0.05, 2.0, 16);
    const auto r = profile_ml_lengthscale(ps, y, Kernel{}, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(r.grid_scale[i] < r.grid_scale[i - 1]);
}

TEST_CASE("profile rejects kernels without a lengthscale")
{
    Kernel b;
    b.family = KernelFamily::brownian;
    const std::vector<double> y(4, 1.0), grid{0.5};
    CHECK_THROWS_AS(profile_ml_lengthscale(sobol_points(4, 1), y, b, grid), ValidationError);
}

TEST_CASE("profiled lengthscale recovers the generating one")
{
    const auto grid = default_lengthscale_grid();
    const double target = 0.3;
    std::size_t hi = 0;
    while (grid[hi] < target) ++hi;
    const std::size_t lo = hi - 1; // grid[lo] < 0.3 <= grid[hi]
    Kernel k;
    k.lengthscale = {target};
    k.nugget = 1e-8;
    int hits = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const PointSet ps = randomize(sobol_points(200, 2), Randomization::digital_shift, RngStream{s, 1});
        const auto draw = gp_joint_draw(ps, k, RngStream{s, 2});
        Kernel base;
        base.nugget = k.nugget;
        const auto r = profile_ml_lengthscale(ps, draw.y, base, grid);
        const auto idx = std::size_t(std::find(grid.begin(), grid.end(), r.lengthscale) - grid.begin());
        hits += idx + 1 >= lo && idx <= hi + 1;
    }
    CHECK(hits >= 80);
}

TEST_CASE("posterior mean interpolates the data")
{
    for (auto fam : {KernelFamily::squared_exponential, KernelFamily::matern_half, KernelFamily::bernoulli_lattice}) {
        Kernel k;
        k.family = fam;
        k.lengthscale = {0.3};
        const PointSet ps = sobol_points(24, 2);
        std::vector<double> y(24);
        for (std::size_t i = 0; i < 24; ++i) y[i] = std::exp(ps(i, 0)) * std::cos(3 * ps(i, 1));
        const GpInterpolant g(ps, y, k);
        for (std::size_t i = 0; i < 24; ++i) CHECK(g(ps.point(i)) == Catch::Approx(y[i]).epsilon(1e-6));
        const auto m = kernel_means(k, ps);
        CHECK(g.integral() == Catch::Approx(Eigen::Map<const Eigen::VectorXd>(m.z.data(), 24).dot(g.coefficients())));
    }
}
