#include "uqbench/errors.hpp"
#include "uqbench/kernel.hpp"
#include "uqbench/points.hpp"
#include "uqbench/rng.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <catch_amalgamated.hpp>

#include <cmath>

using namespace uqbench;
using boost::math::quadrature::gauss_kronrod;

namespace {

double quad(const std::function<double(double)>& g, const std::vector<double>& breaks)
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        s += gauss_kronrod<double, 31>::integrate(g, breaks[i], breaks[i + 1], 10, 1e-12);
    return s;
}

// Kernel-mean oracles by one-dimensional quadrature of the factor, split at
// the kinks (x itself and, for the periodic kernel, nothing else needed).
double z_oracle(const Kernel& k, std::size_t dim, double x)
{
    return quad([&](double y) { return kernel_factor(k, dim, x, y); }, {0.0, x, 1.0});
}

double kbb_oracle(const Kernel& k, std::size_t dim)
{
    return quad([&](double x) { return z_oracle(k, dim, x); }, {0.0, 1.0});
}

Kernel random_kernel(KernelFamily fam, std::size_t d, Philox& g)
{
    Kernel k;
    k.family = fam;
    k.scale = 0.5 + 2.0 * g.uniform();
    k.lengthscale.clear();
    k.gamma.clear();
    for (std::size_t j = 0; j < d; ++j) {
        k.lengthscale.push_back(0.05 + 1.5 * g.uniform());
        k.gamma.push_back(0.1 + 2.0 * g.uniform());
    }
    return k;
}

const KernelFamily kFamilies[] = {KernelFamily::squared_exponential, KernelFamily::matern_half,
                                  KernelFamily::brownian, KernelFamily::bernoulli_lattice};

} // namespace

TEST_CASE("kernel evaluation examples")
{
    Kernel se;
    se.scale = 2.5;
    const double x[2] = {0.3, 0.7};
    CHECK(kernel_eval(se, std::span(x, 2), std::span(x, 2)) == Catch::Approx(2.5));

    Kernel b;
    b.family = KernelFamily::bernoulli_lattice;
    b.scale = 3.0;
    CHECK(kernel_eval(b, std::span(x, 1), std::span(x, 1)) == Catch::Approx(3.0 * (1.0 + 1.0 / 6)));

    Kernel m;
    m.family = KernelFamily::matern_half;
    m.lengthscale = {0.2, 0.9};
    const double y[2] = {0.9, 0.1};
    Kernel m0 = m, m1 = m;
    m0.lengthscale = {0.2};
    m1.lengthscale = {0.9};
    const double prod = kernel_eval(m0, std::span(x, 1), std::span(y, 1)) *
                        kernel_eval(m1, std::span(x + 1, 1), std::span(y + 1, 1));
    CHECK(kernel_eval(m, std::span(x, 2), std::span(y, 2)) == Catch::Approx(prod));
    CHECK(prod == Catch::Approx(std::exp(-0.6 / 0.2 - 0.6 / 0.9)));

    Kernel br;
    br.family = KernelFamily::brownian;
    CHECK(kernel_eval(br, std::span(x, 1), std::span(y, 1)) == Catch::Approx(0.3));
    CHECK_THROWS_AS(br.validate(2), ValidationError);
}

TEST_CASE("kernel means: closed-form examples")
{
    Kernel br;
    br.family = KernelFamily::brownian;
    br.scale = 2.0;
    PointSet half;
    half.n = half.d = 1;
    half.coords = {0.5};
    const auto m = kernel_means(br, half);
    CHECK(m.z[0] == Catch::Approx(0.375 * 2.0));
    CHECK(m.kbarbar == Catch::Approx(2.0 / 3));

    Kernel b;
    b.family = KernelFamily::bernoulli_lattice;
    b.scale = 1.7;
    b.gamma = {0.5, 2.0};
    const auto mb = kernel_means(b, sobol_points(10, 2));
    for (double z : mb.z) CHECK(z == Catch::Approx(1.7));
    CHECK(mb.kbarbar == Catch::Approx(1.7));

    Kernel se;
    se.lengthscale = {0.3};
    CHECK(kernel_mean_factor(se, 0, 0.4) == Catch::Approx(z_oracle(se, 0, 0.4)).epsilon(1e-8));
}

TEST_CASE("kernel means agree with quadrature for every family")
{
    Philox g(RngStream{2024, 0});
    for (KernelFamily fam : kFamilies) {
        const std::size_t d = fam == KernelFamily::brownian ? 1 : 2;
        for (int c = 0; c < 20; ++c) {
            const Kernel k = random_kernel(fam, d, g);
            const PointSet design = iid_points(4, d, RngStream{7, std::uint64_t(c)});
            const auto m = kernel_means(k, design);
            double kbb = k.scale;
            for (std::size_t j = 0; j < d; ++j) kbb *= kbb_oracle(k, j);
            INFO(to_string(fam) << " config " << c);
            CHECK(m.kbarbar == Catch::Approx(kbb).epsilon(1e-8));
            for (std::size_t i = 0; i < design.n; ++i) {
                double z = k.scale;
                for (std::size_t j = 0; j < d; ++j) z *= z_oracle(k, j, design(i, j));
                CHECK(m.z[i] == Catch::Approx(z).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("gram matrices are positive semidefinite")
{
    Philox g(RngStream{99, 0});
    for (KernelFamily fam : kFamilies) {
        const std::size_t d = fam == KernelFamily::brownian ? 1 : 2;
        for (int c = 0; c < 50; ++c) {
            const Kernel k = random_kernel(fam, d, g);
            const Eigen::MatrixXd K = gram(k, iid_points(20, d, RngStream{5, std::uint64_t(c)}));
            CHECK((K - K.transpose()).norm() == 0.0);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10 * K.trace());
        }
    }
}

TEST_CASE("gram diagonal carries the nugget even for repeated points")
{
    Kernel k;
    k.scale = 2.0;
    k.nugget = 1e-3;
    PointSet ps;
    ps.n = 2;
    ps.d = 1;
    ps.coords = {0.4, 0.4};
    const Eigen::MatrixXd K = gram(k, ps);
    CHECK(K(0, 0) == Catch::Approx(2.0 * (1 + 1e-3)));
    CHECK(K(0, 1) == Catch::Approx(2.0));
}

TEST_CASE("kernel json round trip and strictness")
{
    Kernel k;
    k.family = KernelFamily::bernoulli_lattice;
    k.gamma = {0.5, 0.25};
    k.scale = 3.0;
    const Kernel back = kernel_from_json(to_json(k));
    CHECK(back.family == k.family);
    CHECK(back.gamma == k.gamma);
    CHECK(back.scale == k.scale);
    CHECK_THROWS_AS(kernel_from_json(nlohmann::json{{"family", "squared_exponential"}, {"lenghtscale", 1}}),
                    ValidationError);
    CHECK_THROWS_AS(kernel_from_json(nlohmann::json{{"family", "matern_five_halves"}}), ValidationError);
}
