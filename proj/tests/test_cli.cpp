#include "cli.hpp"

#include "uqbench/emit.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args)
{
    args.insert(args.begin(), "uqbench");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return uqbench::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("uqbench_cli_" + std::to_string(::getpid()));
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("estimate writes a valid artifact")
{
    TempDir tmp;
    const std::string out = tmp / "e.json";
    REQUIRE(run({"estimate", "--method", "mc", "--fn", "monomial", "--p", "2", "--n", "10000", "--seed", "1",
                 "--level", "0.99", "--format", "json", "--out", out}) == 0);
    const json j = json::parse(slurp(out));
    uqbench::validate_artifact(j);
    CHECK(std::abs(j["mu_hat"].get<double>() - 1.0 / 3) < 4 * j["scale"].get<double>());
    CHECK(j["n_evals"] == 10000);
}

TEST_CASE("compare pairs the evaluation budget with n = 127")
{
    TempDir tmp;
    const std::string out = tmp / "c.json";
    REQUIRE(run({"compare", "--preset", "eta-cubed", "--eta", "1e-3", "--budget", "2048", "--fn", "product_linear",
                 "--d", "4", "--reps", "100", "--out", out}) == 0);
    const json j = json::parse(slurp(out));
    uqbench::validate_artifact(j);
    bool found = false;
    for (const auto& row : j["rows"]) {
        if (row["method"] == "mc") CHECK(row["n_evals"] == 2048);
        if (row["method"] == "bc" && row["label"].get<std::string>().find("dense") != std::string::npos) {
            CHECK(row["n"] == 127);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("xustein emits one report per exponent")
{
    TempDir tmp;
    const std::string out = tmp / "x.json";
    REQUIRE(run({"xustein", "--p", "0,1", "--n", "8,12,16,24,32,48,64", "--lengthscale", "0.5", "--out", out}) == 0);
    const json j = json::parse(slurp(out));
    uqbench::validate_artifact(j);
    CHECK(j["reports"].size() == 2);
}

TEST_CASE("outputs do not depend on the worker count")
{
    TempDir tmp;
    const std::vector<std::vector<std::string>> cmds{
        {"calibrate", "--fn", "exponential", "--method", "mc_bootstrap", "--n", "20", "--B", "200", "--reps", "150"},
        {"calibrate", "--fn", "product_linear", "--d", "3", "--method", "bc", "--n", "16", "--eb", "scale+lengthscale",
         "--reps", "100", "--format", "csv"},
        {"prior-matched", "--n", "16", "--d", "2", "--lengthscale", "0.4", "--reps", "200"},
        {"compare", "--fn", "exponential", "--reps", "20", "--methods", "mc,rqmc,bc,cv"},
    };
    for (const auto& base : cmds) {
        std::string first;
        for (const char* w : {"1", "2", "5"}) {
            auto args = base;
            const std::string out = tmp / (std::string("w") + w);
            args.insert(args.end(), {"--workers", w, "--out", out});
            REQUIRE(run(args) == 0);
            const std::string got = slurp(out);
            if (first.empty())
                first = got;
            else
                CHECK(got == first);
        }
    }
}

TEST_CASE("discrepancy and listing artifacts validate")
{
    TempDir tmp;
    REQUIRE(run({"discrepancy", "--generator", "lattice", "--n", "64", "--d", "1", "--fn", "oscillatory",
                 "--randomization", "shift_mod1", "--out", tmp / "d.json", "--points-out", tmp / "p.csv"}) == 0);
    const json d = json::parse(slurp(tmp / "d.json"));
    uqbench::validate_artifact(d);
    CHECK(d["bound_holds"] == true);
    CHECK(slurp(tmp / "p.csv").rfind("# generator=lattice", 0) == 0);

    REQUIRE(run({"list-integrands", "--out", tmp / "l.json"}) == 0);
    const json l = json::parse(slurp(tmp / "l.json"));
    uqbench::validate_artifact(l);
    CHECK(l["integrands"].size() >= 6);
}

TEST_CASE("invalid arguments exit with 2")
{
    CHECK(run({}) == 2);
    CHECK(run({"estimate"}) == 2);
    CHECK(run({"estimate", "--fn", "exponential", "--bogus", "1"}) == 2);
    CHECK(run({"estimate", "--fn", "nope"}) == 2);
    CHECK(run({"estimate", "--fn", "heavy_tail", "--alpha", "1.5"}) == 2);
    CHECK(run({"estimate", "--fn", "exponential", "--method", "mc", "--B", "300"}) == 2);
    CHECK(run({"estimate", "--fn", "exponential", "--format", "svg"}) == 2);
    CHECK(run({"calibrate", "--fn", "exponential", "--reps", "10"}) == 2);
    CHECK(run({"calibrate", "--fn", "exponential", "--levels", "0.5,1.2"}) == 2);
    CHECK(run({"discrepancy", "--n", "600", "--d", "2"}) == 2);
    CHECK(run({"xustein", "--p", "5"}) == 2);
    CHECK(run({"estimate", "--fn", "exponential", "--workers", "0"}) == 2);
}

TEST_CASE("help exits with 0 and I/O failures exit with 3")
{
    CHECK(run({"--help"}) == 0);
    CHECK(run({"estimate", "--fn", "exponential", "--out", "/nonexistent-dir/e.json"}) == 3);
}
