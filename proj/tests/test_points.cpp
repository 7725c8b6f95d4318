#include "uqbench/errors.hpp"
#include "uqbench/points.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

using namespace uqbench;

namespace {

// Every elementary box [a 2^-k, (a+1) 2^-k) x [b 2^-(m-k), ...) holds exactly one point.
bool is_zero_m_two_net(const PointSet& ps, int m)
{
    const std::size_t n = std::size_t{1} << m;
    for (int k = 0; k <= m; ++k) {
        std::vector<int> count(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto a = static_cast<std::size_t>(std::ldexp(ps(i, 0), k));
            const auto b = static_cast<std::size_t>(std::ldexp(ps(i, 1), m - k));
            ++count[(a << (m - k)) | b];
        }
        for (int c : count)
            if (c != 1) return false;
    }
    return true;
}

double van_der_corput(std::uint64_t i)
{
    double x = 0.0, f = 0.5;
    for (; i; i >>= 1, f *= 0.5)
        if (i & 1) x += f;
    return x;
}

} // namespace

TEST_CASE("sobol first points match the reference sequence")
{
    const PointSet ps = sobol_points(8, 3);
    const double ref[8][3] = {{0, 0, 0},         {.5, .5, .5},       {.25, .75, .75},   {.75, .25, .25},
                              {.125, .625, .375}, {.625, .125, .875}, {.375, .375, .625}, {.875, .875, .125}};
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 3; ++j) CHECK(ps(i, j) == ref[i][j]);
    CHECK(ps.generator == Generator::sobol);
}

TEST_CASE("sobol first coordinate is the van der Corput sequence")
{
    const PointSet ps = sobol_points(1000, 1);
    for (std::size_t i = 0; i < ps.n; ++i) CHECK(ps(i, 0) == van_der_corput(i));
}

TEST_CASE("sobol prefixes are nested")
{
    const PointSet a = sobol_points(100, 5), b = sobol_points(300, 5);
    for (std::size_t i = 0; i < a.coords.size(); ++i) CHECK(a.coords[i] == b.coords[i]);
}

TEST_CASE("sobol in 50 dimensions stays in the unit cube with stratified projections")
{
    const PointSet ps = sobol_points(256, 50);
    for (std::size_t j = 0; j < 50; ++j) {
        std::vector<int> cell(256, 0);
        for (std::size_t i = 0; i < 256; ++i) {
            REQUIRE(ps(i, j) >= 0.0);
            REQUIRE(ps(i, j) < 1.0);
            ++cell[static_cast<std::size_t>(ps(i, j) * 256)];
        }
        for (int c : cell) CHECK(c == 1);
    }
    CHECK_THROWS_AS(sobol_points(4, 51), UnsupportedDimension);
}

TEST_CASE("sobol first two dimensions form a (0,m,2)-net, also after randomization")
{
    const PointSet ps = sobol_points(512, 2);
    CHECK(is_zero_m_two_net(ps, 9));
    CHECK(is_zero_m_two_net(randomize(ps, Randomization::digital_shift, RngStream{3, 1}), 9));
    CHECK(is_zero_m_two_net(randomize(ps, Randomization::nested_scramble, RngStream{3, 2}), 9));
}

TEST_CASE("direction-number table parses the embedded text")
{
    const SobolTable t = SobolTable::parse(builtin_direction_numbers_text());
    CHECK(t.max_dimension() == 50);
    CHECK(t.directions(1) == SobolTable::builtin().directions(1));
    CHECK(t.directions(0)[0] == 0x80000000u);
}

TEST_CASE("lattice points form a group under addition mod 1")
{
    const std::size_t n = 64;
    const auto g = cbc_lattice_vector(n, 3);
    REQUIRE(g.size() == 3);
    CHECK(g[0] == 1);
    const PointSet ps = lattice_points(n, g);
    for (std::size_t i = 0; i < n; i += 5)
        for (std::size_t k = 0; k < n; k += 7)
            for (std::size_t j = 0; j < 3; ++j) {
                double s = ps(i, j) + ps(k, j);
                if (s >= 1.0) s -= 1.0;
                CHECK(s == Catch::Approx(ps((i + k) % n, j)).margin(1e-15));
            }
}

TEST_CASE("lattice generating vectors are coprime to n")
{
    for (std::size_t n : {16u, 64u, 100u, 127u}) {
        for (auto g : cbc_lattice_vector(n, 4)) {
            std::uint64_t a = g, b = n;
            while (b) a = std::exchange(b, a % b);
            CHECK(a == 1);
        }
    }
}

TEST_CASE("digital shift is an involution for the same stream")
{
    const PointSet ps = sobol_points(64, 4);
    const RngStream s{11, 4};
    const PointSet twice = randomize(randomize(ps, Randomization::digital_shift, s), Randomization::digital_shift, s);
    for (std::size_t i = 0; i < ps.coords.size(); ++i) CHECK(twice.coords[i] == ps.coords[i]);
}

TEST_CASE("randomized points are uniform in distribution")
{
    const PointSet sob = sobol_points(16, 2);
    const PointSet lat = lattice_points(16, cbc_lattice_vector(16, 2));
    double s_ds = 0, s_ns = 0, s_sh = 0;
    const int reps = 4000;
    for (int r = 0; r < reps; ++r) {
        s_ds += randomize(sob, Randomization::digital_shift, RngStream{1, std::uint64_t(r)})(0, 1);
        s_ns += randomize(sob, Randomization::nested_scramble, RngStream{2, std::uint64_t(r)})(3, 0);
        s_sh += randomize(lat, Randomization::shift_mod1, RngStream{3, std::uint64_t(r)})(5, 1);
    }
    CHECK(s_ds / reps == Catch::Approx(0.5).margin(0.015));
    CHECK(s_ns / reps == Catch::Approx(0.5).margin(0.015));
    CHECK(s_sh / reps == Catch::Approx(0.5).margin(0.015));
}

TEST_CASE("randomization rules reject mismatched generators")
{
    const PointSet sob = sobol_points(8, 2);
    const PointSet lat = lattice_points(8, cbc_lattice_vector(8, 2));
    CHECK_THROWS_AS(randomize(lat, Randomization::digital_shift, RngStream{}), ValidationError);
    CHECK_THROWS_AS(randomize(sob, Randomization::shift_mod1, RngStream{}), ValidationError);
    const PointSet iid = iid_points(8, 2, RngStream{});
    CHECK(randomize(iid, Randomization::digital_shift, RngStream{}).warnings.size() == 1);
}

TEST_CASE("iid points depend only on the stream")
{
    const PointSet a = iid_points(10, 3, RngStream{7, 2}), b = iid_points(10, 3, RngStream{7, 2});
    CHECK(a.coords == b.coords);
    CHECK(a.coords != iid_points(10, 3, RngStream{7, 3}).coords);
}

TEST_CASE("point set csv carries the metadata header")
{
    const PointSet ps = lattice_points(4, std::vector<std::uint64_t>{1, 3});
    const std::string csv = to_csv(ps);
    CHECK(csv.rfind("# generator=lattice[1 3], randomization=none, seed=0, n=4, d=2\n", 0) == 0);
}
