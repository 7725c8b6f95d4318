#include "uqbench/budget.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/integrands.hpp"
#include "uqbench/linalg.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace uqbench;

TEST_CASE("equal budget examples")
{
    CHECK(equal_budget(2048, 1e-3) == 127);
    CHECK(nearest_power_of_two(equal_budget(2048, 1e-3)) == 128);
    CHECK(equal_budget(8, 1) == 2);
    CHECK(equal_budget(1, 1) == 1);
    CHECK(equal_budget(1, 100) == 1);
    CHECK(nearest_power_of_two(96) == 64);
    CHECK(nearest_power_of_two(97) == 128);
    CHECK(nearest_power_of_two(1) == 1);
    CHECK_THROWS_AS(equal_budget(0.5, 1), ValidationError);
}

TEST_CASE("equal budget minimizes the cost mismatch over integers")
{
    for (double N : {1.0, 7.0, 100.0, 2048.0, 5e5, 1.234e7})
        for (double eta : {1e-4, 1e-3, 0.37, 1.0, 3.0}) {
            const std::size_t n = equal_budget(N, eta);
            const double gap = std::abs(eta * std::pow(double(n), 3) - N);
            for (std::size_t m = (n > 3 ? n - 3 : 1); m <= n + 3; ++m)
                CHECK(gap <= std::abs(eta * std::pow(double(m), 3) - N));
        }
}

TEST_CASE("budget preset pairs 2048 evaluations with n = 127 for dense cubature")
{
    MethodConfig mc, rq, bc, circ;
    rq.method = Method::rqmc;
    rq.m = 16;
    bc.method = Method::bc;
    bc.solver = BcSolver::dense;
    circ.method = Method::bc;
    circ.kernel.family = KernelFamily::bernoulli_lattice;
    circ.rule = RqmcRule::lattice_shift;
    circ.solver = BcSolver::circulant;
    const Integrand f = registry_get("product_linear", 4);
    const ComparisonTable t = compare_at_budget({mc, rq, bc, circ}, f, BudgetModel{}, 20, 0, 2);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0].n_evals == 2048);
    CHECK(t.rows[1].n_evals == 2048);
    CHECK(t.rows[1].n == 128);
    CHECK(t.rows[2].n == 127);
    CHECK(t.rows[3].n > 1000);
    for (const auto& row : t.rows) {
        CHECK_FALSE(row.excluded);
        CHECK(std::abs(row.modeled_cost - 2048) <= 0.05 * 2048);
    }
    CHECK(t.rows[2].modeled_cost == Catch::Approx(1e-3 * 127 * 127 * 127));
}

TEST_CASE("comparison on a constant integrand has zero error")
{
    MethodConfig mc;
    const ComparisonTable t = compare_at_budget({mc}, registry_get("constant", 2), BudgetModel{}, 5, 0);
    CHECK(t.rows[0].rmse == 0.0);
    CHECK(t.rows[0].coverage_99 == 1.0);
}

TEST_CASE("methods that cannot fit the budget are excluded with a diagnostic")
{
    MethodConfig bc;
    bc.method = Method::bc;
    BudgetModel b;
    b.budget_evals = 5;
    b.eta = 10;
    const ComparisonTable t = compare_at_budget({bc}, registry_get("exponential", 1), b, 5, 0);
    CHECK(t.rows[0].excluded);
    CHECK_FALSE(t.rows[0].diagnostic.empty());
}

TEST_CASE("general cost model charges evaluations and flops")
{
    BudgetModel b;
    b.eta_preset = false;
    b.c_f = 2.0;
    b.c_lin = 0.01;
    MethodConfig bc;
    bc.method = Method::bc;
    bc.solver = BcSolver::dense;
    bc.n = 20;
    CHECK(modeled_cost(bc, b) ==
          Catch::Approx(2.0 * 20 + 0.01 * (dense_factor_flops(20) + triangular_solve_flops(20))));
    MethodConfig mc;
    mc.n = 300;
    CHECK(modeled_cost(mc, b) == Catch::Approx(600.0));
    b.c_f = b.c_lin = 0.0;
    CHECK_THROWS_AS(b.validate(), ValidationError);
}
