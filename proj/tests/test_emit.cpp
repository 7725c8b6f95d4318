#include "uqbench/emit.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"
#include "uqbench/integrands.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

using namespace uqbench;
using nlohmann::json;

namespace {

CalibrationReport small_report(std::size_t workers)
{
    MethodConfig cfg;
    cfg.n = 40;
    return coverage_experiment(cfg, registry_get("exponential", 1), default_levels(), 100, 3, workers);
}

} // namespace

TEST_CASE("number formatting")
{
    CHECK(format_sig12(0.1) == "0.1");
    CHECK(format_sig12(1.0 / 3) == "0.333333333333");
    CHECK(format_sig12(2048) == "2048");
    CHECK(format_sig12(-2.5e-20) == "-2.5e-20");
    CHECK(std::stod(format_roundtrip(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("json dump is canonical")
{
    json j;
    j["b"] = 1.0 / 3;
    j["a"] = std::vector<double>{1, 2.5};
    j["c"] = std::numeric_limits<double>::quiet_NaN();
    const std::string s = dump_json(j);
    CHECK(s == "{\n  \"a\": [1, 2.5],\n  \"b\": 0.333333333333,\n  \"c\": null\n}\n");
    CHECK(dump_json(json::parse(s)) == s);
}

TEST_CASE("same run twice gives identical bytes")
{
    for (Format f : {Format::json, Format::csv, Format::svg}) {
        CHECK(render(small_report(1), f) == render(small_report(3), f));
    }
}

TEST_CASE("calibration csv and svg schema")
{
    const auto r = small_report(1);
    const std::string csv = render(r, Format::csv);
    CHECK(csv.rfind("level,coverage,lo,hi,R\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    const std::string svg = render(r, Format::svg);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("id=\"reference-diagonal\"") != std::string::npos);
}

TEST_CASE("estimate artifacts")
{
    const Estimate e = mc_estimate(registry_get("monomial", 1), 100, RngStream{1, 0});
    const json j = json::parse(render(e, {0.95, 0.99}, Format::json));
    CHECK(j["kind"] == "estimate");
    CHECK(j["intervals"].contains("0.99"));
    CHECK_NOTHROW(validate_artifact(j));
    CHECK(render(e, {0.99}, Format::csv).rfind("method,mu_hat,scale,interval_kind,df,n_evals,flops_linear,level,lo,hi\n", 0) ==
          0);
    CHECK_THROWS_AS(render(e, {0.99}, Format::svg), ValidationError);
}

TEST_CASE("all artifacts validate against their schema")
{
    CHECK_NOTHROW(validate_artifact(json::parse(render(small_report(1), Format::json))));

    MethodConfig mc;
    const ComparisonTable t = compare_at_budget({mc}, registry_get("exponential", 1), BudgetModel{}, 5, 0);
    CHECK_NOTHROW(validate_artifact(json::parse(render(t, Format::json))));
    CHECK(render(t, Format::csv).rfind("label,method,n,m,n_evals,flops_linear,modeled_cost,rmse,mean_width_99,coverage_99,excluded,diagnostic\n", 0) == 0);
    CHECK(render(t, Format::svg).rfind("<svg", 0) == 0);

    const auto xs = xu_stein_experiment({0, 1}, {8, 12, 16, 24}, 0.5, 1e-10);
    CHECK_NOTHROW(validate_artifact(json::parse(render(xs, Format::json))));
    CHECK(render(xs, Format::csv).rfind("p,n,sigma_hat,lengthscale,condition_number,jitter\n", 0) == 0);
    CHECK(render(xs, Format::svg).rfind("<svg", 0) == 0);
}

TEST_CASE("schema validation rejects malformed artifacts")
{
    json j = json::parse(render(small_report(1), Format::json));
    j.erase("coverage");
    CHECK_THROWS_AS(validate_artifact(j), ValidationError);
    CHECK_THROWS_AS(validate_artifact(json{{"kind", "mystery"}}), ValidationError);
    CHECK_THROWS_AS(validate_artifact(json::array()), ValidationError);
}

TEST_CASE("write failures raise I/O errors")
{
    CHECK_THROWS_AS(write_artifact("/nonexistent-dir/x.json", "{}"), IoError);
}
