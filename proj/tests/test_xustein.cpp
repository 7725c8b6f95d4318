#include "uqbench/errors.hpp"
#include "uqbench/xustein.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace uqbench;

namespace {
const std::vector<std::size_t> kSizes{8, 12, 16, 24, 32, 48, 64};
}

TEST_CASE("constant target: scale falls at the n^-1/2 rate")
{
    const auto r = xu_stein_experiment({0}, kSizes, 0.5, 1e-10);
    REQUIRE(r.size() == 1);
    CHECK(r[0].target_slope == -0.5);
    CHECK(r[0].fitted_slope == Catch::Approx(-0.5).margin(0.1));
    CHECK(r[0].ns == kSizes);
    for (double s : r[0].sigma_hat) CHECK(s > 0.0);
}

TEST_CASE("reports carry conditioning diagnostics")
{
    const auto r = xu_stein_experiment({1, 2}, kSizes, 0.5, 1e-10);
    REQUIRE(r.size() == 2);
    for (const auto& rep : r) {
        CHECK(rep.target_slope == rep.p - 0.5);
        CHECK(rep.condition_number.size() == rep.ns.size());
        CHECK(rep.jitter.size() == rep.ns.size());
        for (double c : rep.condition_number) CHECK(c >= 1.0);
        CHECK(rep.ns.size() + rep.dropped.size() == kSizes.size());
    }
    // conditioning worsens as the design fills in
    CHECK(r[0].condition_number.back() > r[0].condition_number.front());
}

TEST_CASE("profiled reports record a lengthscale per size")
{
    const auto r = xu_stein_experiment({1}, kSizes, 0.5, 1e-10, true);
    CHECK(r[0].profiled);
    CHECK(r[0].lengthscales.size() == r[0].ns.size());
}

TEST_CASE("scale growth rejects a zero signal and bad inputs")
{
    CHECK_THROWS_AS(scale_growth([](double) { return 0.0; }, 0, kSizes, 0.5, 1e-10), ValidationError);
    CHECK_THROWS_AS(xu_stein_experiment({4}, kSizes, 0.5, 1e-10), ValidationError);
    CHECK_THROWS_AS(xu_stein_experiment({1}, {8, 16, 32}, 0.5, 1e-10), ValidationError);
}
