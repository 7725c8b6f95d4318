#include "uqbench/errors.hpp"
#include "uqbench/kernel.hpp"
#include "uqbench/linalg.hpp"
#include "uqbench/points.hpp"
#include "uqbench/rng.hpp"

#include <Eigen/LU>
#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

using namespace uqbench;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& a, bool inverse)
{
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += a[j] * std::polar(1.0, sign * 2.0 * std::numbers::pi * double((j * k) % n) / double(n));
        out[k] = inverse ? s / double(n) : s;
    }
    return out;
}

Eigen::MatrixXd random_spd(int n, std::uint64_t seed)
{
    Philox g(RngStream{seed, 0});
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = g.normal();
    return A * A.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

} // namespace

TEST_CASE("dense solve examples")
{
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
    CHECK(dense_solve(Eigen::MatrixXd::Identity(5, 5), b).solution.isApprox(b, 1e-15));

    Eigen::Matrix2d K{{1.0, 0.5}, {0.5, 1.0}};
    const auto r = dense_solve(K, Eigen::Vector2d(1.0, 1.0));
    CHECK(r.solution(0) == Catch::Approx(2.0 / 3));
    CHECK(r.solution(1) == Catch::Approx(2.0 / 3));
    CHECK(r.flops_linear == Catch::Approx(8.0 / 3 + 8.0));
    CHECK(r.escalations == 0);

    const Eigen::MatrixXd A = random_spd(50, 3);
    const Eigen::MatrixXd rhs = Eigen::MatrixXd::Random(50, 3);
    const auto big = dense_solve(A, rhs);
    CHECK((A * big.solution - rhs).norm() <= 1e-8 * rhs.norm());
    CHECK(big.flops_linear == Catch::Approx(50.0 * 50 * 50 / 3 + 3 * 2.0 * 50 * 50));
}

TEST_CASE("dense solve escalates jitter on a singular matrix and fails on an indefinite one")
{
    Eigen::MatrixXd K = Eigen::MatrixXd::Ones(4, 4); // rank one
    const auto r = dense_solve(K, Eigen::VectorXd::Ones(4));
    CHECK(r.escalations >= 1);
    CHECK(r.jitter > 0.0);
    CHECK(r.jitter <= 1e-6 * 1.0 + 1e-18);

    Eigen::Matrix2d bad{{1.0, 2.0}, {2.0, 1.0}};
    CHECK_THROWS_AS(dense_solve(bad, Eigen::Vector2d(1, 1)), NumericalError);
}

TEST_CASE("spd factor log determinant and half solve")
{
    const Eigen::MatrixXd A = random_spd(12, 8);
    const SpdFactor f(A);
    CHECK(f.log_det() == Catch::Approx(std::log(A.determinant())).epsilon(1e-10));
    const Eigen::VectorXd b = Eigen::VectorXd::Random(12);
    const Eigen::VectorXd h = f.half_solve(b);
    CHECK(h.squaredNorm() == Catch::Approx(b.dot(A.ldlt().solve(b))).epsilon(1e-10));
}

TEST_CASE("fft agrees with the direct transform for all small lengths")
{
    Philox g(RngStream{4, 0});
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 12u, 17u, 31u, 64u, 100u, 127u}) {
        std::vector<std::complex<double>> a(n);
        for (auto& v : a) v = {g.normal(), g.normal()};
        for (bool inv : {false, true}) {
            const auto got = fft(a, inv), want = naive_dft(a, inv);
            for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-11 * (1.0 + std::abs(want[k])));
        }
        const auto back = fft(fft(a), true);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(back[k] - a[k]) < 1e-12);
    }
}

TEST_CASE("circulant solve: identity and dense equivalence")
{
    std::vector<double> e1(16, 0.0), rhs(16);
    e1[0] = 1.0;
    for (std::size_t i = 0; i < 16; ++i) rhs[i] = std::sin(double(i));
    const auto id = circulant_solve(e1, rhs);
    for (std::size_t i = 0; i < 16; ++i) CHECK(id.solution[i] == Catch::Approx(rhs[i]).margin(1e-14));

    for (std::size_t n : {7u, 64u, 100u}) {
        Kernel k;
        k.family = KernelFamily::bernoulli_lattice;
        k.gamma = {0.8};
        const PointSet ps = lattice_points(n, cbc_lattice_vector(n, 1));
        const Eigen::MatrixXd K = gram(k, ps);
        std::vector<double> row(n), b(n);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = K(0, j);
            b[j] = std::cos(3.0 * double(j));
        }
        const auto c = circulant_solve(row, b);
        const Eigen::VectorXd x = dense_solve(K, Eigen::Map<Eigen::VectorXd>(b.data(), n)).solution;
        CHECK(c.floored_modes == 0);
        for (std::size_t i = 0; i < n; ++i) CHECK(c.solution[i] == Catch::Approx(x(i)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(circulant_solve(e1, std::vector<double>(3, 1.0)), ValidationError);
}

TEST_CASE("circulant solve floors null modes")
{
    // all-ones circulant has one nonzero eigenvalue n
    const std::vector<double> ones(8, 1.0);
    std::vector<double> rhs(8, 2.0);
    const auto r = circulant_solve(ones, rhs);
    CHECK(r.floored_modes == 7);
    for (double x : r.solution) CHECK(x == Catch::Approx(0.25));
}

TEST_CASE("cost model")
{
    CHECK(dense_factor_flops(3) == Catch::Approx(9.0));
    CHECK(triangular_solve_flops(10) == Catch::Approx(200.0));
    CHECK(fft_flops(1024) == Catch::Approx(5.0 * 1024 * 10));
    CHECK(circulant_solve_flops(1024) == Catch::Approx(3 * 5.0 * 1024 * 10 + 6.0 * 1024));
    const std::size_t n = 1 << 14;
    CHECK(circulant_solve_flops(n) / (dense_factor_flops(n) + triangular_solve_flops(n)) < 1e-3);
    double prev = 1.0;
    for (std::size_t m = 16; m <= n; m *= 2) {
        const double ratio = circulant_solve_flops(m) / (dense_factor_flops(m) + triangular_solve_flops(m));
        CHECK(ratio < prev);
        prev = ratio;
    }
}
