#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mfgs/analyze.hpp"
#include "mfgs/errors.hpp"

#include "support/test_helpers.hpp"

#include <cmath>
#include <numbers>

using namespace mfgs;
using namespace mfgs::testing;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

struct Solved {
    Problem problem;
    State state;
};

Solved solve_case(int n, double lambda, Coupling coupling, double amplitude = 0.5) {
    auto space = std::make_shared<const FemSpace>(build_mesh(1, n));
    Field m0 = amplitude == 0.0
                   ? constant_field(space->mesh_ptr(), 1.0)
                   : space->project([amplitude](Point p) {
                         return 1.0 + amplitude * std::cos(kTwoPi * p[0]);
                     });
    Problem problem(space, lambda, std::move(coupling), std::move(m0));
    auto [state, report] = newton_solve(
        problem, State{constant_field(space->mesh_ptr(), 0.0), problem.m0()});
    REQUIRE(report.converged);
    return {std::move(problem), std::move(state)};
}

} // namespace

TEST_CASE("certificate at the trivial solution") {
    const Solved s = solve_case(32, 1.0, zero_coupling(), 0.0);
    const StabilityReport r = certify_stability(s.problem, s.state);
    CHECK(r.stable);
    CHECK(r.sigma_min > 0.0);
    CHECK(r.sigma_converged);
    CHECK(r.monotone_condition);
    CHECK(r.K_hat == 0.0);
    CHECK(r.M_hat == 0.0);
    CHECK(r.Lambda_hat == 0.0);
    CHECK(r.large_lambda_condition); // lambda = 1 > 0
}

TEST_CASE("certificate requires a converged state") {
    const Solved s = solve_case(32, 1.0, atan_coupling(1.0));
    State off = s.state;
    off.u.values.array() += 0.1;
    CHECK_THROWS_AS(certify_stability(s.problem, off), ValidationError);
}

TEST_CASE("monotone coupling certifies stable across lambda") {
    for (const double lambda : {0.5, 1.0, 2.0, 5.0}) {
        CAPTURE(lambda);
        const Solved s = solve_case(32, lambda, atan_coupling(1.0));
        const StabilityReport r = certify_stability(s.problem, s.state);
        CHECK(r.monotone_condition);
        CHECK(r.stable); // sufficiency of Lasry-Lions monotonicity, observed numerically
    }
}

TEST_CASE("non-monotone coupling above Lambda_hat certifies stable") {
    const Solved s = solve_case(32, 10.0, atan_coupling(-1.0));
    const StabilityReport r = certify_stability(s.problem, s.state);
    CHECK(!r.monotone_condition);
    CHECK(r.large_lambda_condition); // 10 > Lambda_hat for this instance
    CHECK(r.stable);
}

TEST_CASE("sigma_min varies little between n = 32 and n = 64") {
    for (const bool monotone : {true, false}) {
        const double lambda = monotone ? 1.0 : 10.0;
        const Coupling coupling = atan_coupling(monotone ? 1.0 : -1.0);
        const Solved a = solve_case(32, lambda, coupling);
        const Solved b = solve_case(64, lambda, coupling);
        const double s32 = certify_stability(a.problem, a.state).sigma_min;
        const double s64 = certify_stability(b.problem, b.state).sigma_min;
        CAPTURE(monotone);
        CHECK(std::abs(s64 - s32) <= 0.1 * s32);
    }
}

TEST_CASE("sensitivity direction: null perturbation is exactly zero") {
    const Solved s = solve_case(32, 1.0, atan_coupling(1.0));
    const State delta = sensitivity_direction(s.problem, s.state, zero_coupling(), s.problem.m0());
    CHECK(delta.u.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(delta.m.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sensitivity direction is linear in the perturbation data") {
    const Solved s = solve_case(32, 1.0, atan_coupling(1.0));
    const State d1 =
        sensitivity_direction(s.problem, s.state, inverse_quadratic_coupling(1.0), s.problem.m0());
    const State d2 =
        sensitivity_direction(s.problem, s.state, inverse_quadratic_coupling(2.0), s.problem.m0());
    CHECK(state_norm(s.problem.space(), d1) > 0.0);
    const State twice = add_scaled(zero_state(s.problem.mesh_ptr()), 2.0, d1);
    CHECK(state_distance(s.problem.space(), d2, twice) <=
          1e-12 * state_norm(s.problem.space(), d2));
}

TEST_CASE("sensitivity direction solves its defining linear system") {
    const Solved s = solve_case(32, 1.0, atan_coupling(1.0));
    const Coupling fhat = inverse_quadratic_coupling(1.0);
    const Field m1 = s.problem.space().project(
        [](Point p) { return 1.0 + 0.3 * std::cos(kTwoPi * p[0] + 1.0); });
    const State delta = sensitivity_direction(s.problem, s.state, fhat, m1);

    const FemSpace& space = s.problem.space();
    const Field fhat_of_m = nodal_map(s.state.m, fhat.eval);
    const Vector xi = space.mass() * fhat_of_m.values;
    const Vector zeta = s.problem.lambda() * (space.mass() * (m1.values - s.problem.m0().values));
    const auto [tu, tm] = s.problem.shifted().apply(xi, zeta);
    const LinearizedSystem dF = assemble_dF(s.problem, s.state);
    const Vector residual = dF.apply(stack(delta)) + stack(State{tu, tm});
    CHECK(residual.norm() <= 1e-10 * stack(State{tu, tm}).norm());
}

TEST_CASE("taylor remainders: coupling and measure branches at order >= 1.8") {
    const Solved s = solve_case(32, 1.0, atan_coupling(1.0));
    SUBCASE("coupling perturbation") {
        const SensitivityResult r = perturbed_taylor_check(
            s.problem, s.state, inverse_quadratic_coupling(1.0), s.problem.m0());
        CHECK(r.observed_order >= 1.8);
    }
    SUBCASE("measure perturbation") {
        const Field m1 = s.problem.space().project(
            [](Point p) { return 1.0 + 0.3 * std::cos(kTwoPi * p[0] + 1.0); });
        const SensitivityResult r =
            perturbed_taylor_check(s.problem, s.state, zero_coupling(), m1);
        CHECK(r.observed_order >= 1.8);
    }
}

TEST_CASE("taylor remainders vanish identically for the null perturbation") {
    const Solved s = solve_case(32, 1.0, atan_coupling(1.0));
    const SensitivityResult r =
        perturbed_taylor_check(s.problem, s.state, zero_coupling(), s.problem.m0());
    for (const auto& [eps, rem] : r.taylor_errors) {
        CAPTURE(eps);
        CHECK(rem == 0.0);
    }
    CHECK(std::isnan(r.observed_order)); // no positive remainders to regress on
}

TEST_CASE("isolation probe: perturbed starts return to the same equilibrium") {
    const Solved s = solve_case(32, 1.0, atan_coupling(1.0));
    const StabilityReport cert = certify_stability(s.problem, s.state);
    REQUIRE(cert.stable);

    std::mt19937_64 rng(2024);
    std::vector<State> results;
    for (int trial = 0; trial < 4; ++trial) {
        State d{{s.problem.mesh_ptr(), random_vector(s.problem.space().size(), rng)},
                {s.problem.mesh_ptr(), random_vector(s.problem.space().size(), rng)}};
        const double norm = state_norm(s.problem.space(), d);
        const State start = add_scaled(s.state, 0.05 / norm, d);
        const auto [solution, report] = newton_solve(s.problem, start);
        REQUIRE(report.converged);
        results.push_back(solution);
    }
    for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t j = i + 1; j < results.size(); ++j)
            CHECK(state_distance(s.problem.space(), results[i], results[j]) < 1e-8);
}

TEST_CASE("sensitivity preconditions") {
    const Solved s = solve_case(32, 1.0, atan_coupling(1.0));
    // m1 without unit mass
    CHECK_THROWS_AS(sensitivity_direction(s.problem, s.state, zero_coupling(),
                                          constant_field(s.problem.mesh_ptr(), 1.5)),
                    ValidationError);
}
