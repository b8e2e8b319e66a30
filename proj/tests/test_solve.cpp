#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mfgs/errors.hpp"
#include "mfgs/manufactured.hpp"
#include "mfgs/solve.hpp"

#include "support/test_helpers.hpp"

#include <cmath>
#include <numbers>

using namespace mfgs;
using namespace mfgs::testing;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

std::shared_ptr<const FemSpace> make_space(int dim, int n) {
    return std::make_shared<const FemSpace>(build_mesh(dim, n));
}

Field cosine_density(const FemSpace& space, double amplitude) {
    return space.project([amplitude](Point p) { return 1.0 + amplitude * std::cos(kTwoPi * p[0]); });
}

Problem atan_problem(int n, double lambda, double scale = 1.0, double amplitude = 0.5) {
    auto space = make_space(1, n);
    return Problem(space, lambda, atan_coupling(scale), cosine_density(*space, amplitude));
}

} // namespace

TEST_CASE("hjb_solve: constant data has the constant solution") {
    auto space = make_space(1, 32);
    const double c = 0.8, lambda = 2.0;
    const Problem problem(space, lambda, constant_coupling(c), constant_field(space->mesh_ptr(), 1.0));
    const Field u = hjb_solve(problem, problem.m0());
    CHECK((u.values.array() - c / lambda).abs().maxCoeff() < 1e-13);

    const Problem zero(space, lambda, zero_coupling(), constant_field(space->mesh_ptr(), 1.0));
    const Field u0 = hjb_solve(zero, zero.m0());
    CHECK(u0.values.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hjb_solve: manufactured solution converges at second order") {
    const double lambda = 1.0;
    const ManufacturedSolution ms = manufactured_solution(1);
    auto l2_error = [&](int n) {
        auto space = make_space(1, n);
        const Field source_u = space->project(manufactured_source_u(ms, lambda, zero_coupling()));
        const Problem problem(space, lambda, zero_coupling(),
                              constant_field(space->mesh_ptr(), 1.0), source_u);
        const Field u = hjb_solve(problem, problem.m0());
        return error_against(u, ms.u, ms.du).first;
    };
    const double e32 = l2_error(32);
    const double e256 = l2_error(256);
    CHECK(std::log(e32 / e256) / std::log(8.0) >= 1.9);
}

TEST_CASE("hjb_solve honors the sup bound") {
    const Problem problem = atan_problem(64, 0.5, 1.0, 0.5);
    const Field u = hjb_solve(problem, problem.m0());
    CHECK(sup_norm(u) <= problem.coupling().sup_f / problem.lambda() + 1e-8);
}

TEST_CASE("fp_solve: constants, mass identity, positivity") {
    auto space = make_space(1, 64);
    const Problem problem(space, 1.0, zero_coupling(), constant_field(space->mesh_ptr(), 1.0));

    const Field m_flat = fp_solve(problem, constant_field(space->mesh_ptr(), 2.0));
    CHECK((m_flat.values.array() - 1.0).abs().maxCoeff() < 1e-13);

    std::mt19937_64 rng(31);
    const Field u_random{space->mesh_ptr(), random_vector(space->size(), rng)};
    const Field m_random = fp_solve(problem, u_random);
    CHECK(std::abs(space->mass_of(m_random) - 1.0) < 1e-12);

    for (int n : {32, 64, 128}) {
        auto sp = make_space(1, n);
        const Problem p(sp, 1.0, zero_coupling(), constant_field(sp->mesh_ptr(), 1.0));
        const Field u = nodal_field(sp->mesh_ptr(),
                                    [](Point x) { return 0.1 * std::cos(kTwoPi * x[0]); });
        const Field m = fp_solve(p, u);
        CHECK(m.values.minCoeff() > 0.0);
        CHECK(std::abs(sp->mass_of(m) - 1.0) < 1e-12);
    }
}

TEST_CASE("newton_solve: exact initial guess converges immediately") {
    for (int dim : {1, 2}) {
        CAPTURE(dim);
        auto space = make_space(dim, dim == 1 ? 32 : 8);
        const Problem problem(space, 1.0, zero_coupling(), constant_field(space->mesh_ptr(), 1.0));
        const State init{constant_field(space->mesh_ptr(), 0.0),
                         constant_field(space->mesh_ptr(), 1.0)};
        const auto [state, report] = newton_solve(problem, init);
        CHECK(report.converged);
        CHECK(report.iterations <= 1);
        CHECK(report.residual_history.back() < 1e-13);
        CHECK(state_distance(problem.space(), state, init) < 1e-12);
    }
}

TEST_CASE("newton_solve: quadratic terminal phase on the atan problem") {
    const Problem problem = atan_problem(64, 1.0);
    const State init{constant_field(problem.mesh_ptr(), 0.0), problem.m0()};
    const auto [state, report] = newton_solve(problem, init);
    CHECK(report.converged);
    CHECK(report.iterations <= 10);
    CHECK(state_norm(problem.space(), residual_F(problem, state)) <= 1e-11);

    // terminal-phase monotonicity: below 1e-3 the residuals strictly decrease
    const auto& res = report.residual_history;
    for (std::size_t k = 0; k + 1 < res.size(); ++k)
        if (res[k] < 1e-3) CHECK(res[k + 1] < res[k]);

    // quadratic signature measured above the round-off floor
    SolverOptions coarse;
    coarse.tol = 1e-7;
    const auto [state2, report2] = newton_solve(problem, init, coarse);
    (void)state2;
    const auto& r = report2.residual_history;
    REQUIRE(r.size() >= 4);
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 1 < r.size(); ++k) ratios.push_back(r[k + 1] / (r[k] * r[k]));
    const std::size_t last = ratios.size();
    for (std::size_t k = last >= 3 ? last - 3 : 0; k < last; ++k) CHECK(ratios[k] <= 100.0);
}

TEST_CASE("newton_solve: budget exhaustion raises MaxIterationsError") {
    const Problem problem = atan_problem(32, 1.0);
    State init{constant_field(problem.mesh_ptr(), 0.0), problem.m0()};
    init.u.values.setConstant(5.0); // far from any solution
    SolverOptions opts;
    opts.max_iter = 0;
    CHECK_THROWS_AS(newton_solve(problem, init, opts), MaxIterationsError);
    try {
        newton_solve(problem, init, opts);
    } catch (const MaxIterationsError& err) {
        CHECK(!err.report.converged);
        CHECK(!err.report.residual_history.empty());
    }
}

TEST_CASE("picard_solve: trivial fixed point in one sweep") {
    auto space = make_space(1, 32);
    const Problem problem(space, 1.0, zero_coupling(), constant_field(space->mesh_ptr(), 1.0));
    const auto [state, report] = picard_solve(problem, problem.m0());
    CHECK(report.converged);
    CHECK(report.iterations == 1);
    CHECK(state_norm(problem.space(), residual_F(problem, state)) < 1e-12);
}

TEST_CASE("picard_solve rejects densities without unit mass") {
    auto space = make_space(1, 16);
    const Problem problem(space, 1.0, zero_coupling(), constant_field(space->mesh_ptr(), 1.0));
    CHECK_THROWS_AS(picard_solve(problem, constant_field(space->mesh_ptr(), 1.3)),
                    ValidationError);
}

TEST_CASE("newton and picard agree in the uniqueness regime") {
    SUBCASE("monotone coupling") {
        const Problem problem = atan_problem(64, 1.0);
        const auto [newton_state, nr] = newton_solve(
            problem, State{constant_field(problem.mesh_ptr(), 0.0), problem.m0()});
        const auto [picard_state, pr] = picard_solve(problem, problem.m0());
        CHECK(nr.converged);
        CHECK(pr.converged);
        CHECK(state_distance(problem.space(), newton_state, picard_state) < 1e-8);
    }
    SUBCASE("large discount factor, non-monotone coupling") {
        const Problem problem = atan_problem(64, 5.0, -1.0);
        const auto [newton_state, nr] = newton_solve(
            problem, State{constant_field(problem.mesh_ptr(), 0.0), problem.m0()});
        const auto [picard_state, pr] = picard_solve(problem, problem.m0());
        CHECK(nr.converged);
        CHECK(pr.converged);
        CHECK(state_distance(problem.space(), newton_state, picard_state) < 1e-8);
    }
}

TEST_CASE("picard damping choices land on the same fixed point") {
    const Problem problem = atan_problem(48, 2.0);
    SolverOptions full;
    full.damping = 1.0;
    SolverOptions half;
    half.damping = 0.5;
    const auto [s1, r1] = picard_solve(problem, problem.m0(), full);
    const auto [s2, r2] = picard_solve(problem, problem.m0(), half);
    CHECK(r1.converged);
    CHECK(r2.converged);
    CHECK(state_distance(problem.space(), s1, s2) < 1e-8);
}

TEST_CASE("solver reports satisfy their invariants") {
    const Problem problem = atan_problem(32, 1.0);
    const auto [state, report] = newton_solve(
        problem, State{constant_field(problem.mesh_ptr(), 0.0), problem.m0()});
    (void)state;
    REQUIRE(!report.residual_history.empty());
    CHECK(report.converged == (report.residual_history.back() <= 1e-11));
    CHECK(report.step_history.size() == static_cast<std::size_t>(report.iterations));
}

TEST_CASE("smallest_singular_value: identity and scaled-block operators") {
    auto space = make_space(1, 24);
    const Problem problem(space, 1.0, zero_coupling(), constant_field(space->mesh_ptr(), 1.0));

    // dG = 0 at the origin state: dF is the identity
    const LinearizedSystem identity = assemble_dF(problem, zero_state(problem.mesh_ptr()));
    const SigmaMinEstimate s1 = smallest_singular_value(identity);
    CHECK(s1.converged);
    CHECK(s1.value == doctest::Approx(1.0).epsilon(1e-6));

    // a11 = A makes the first block 2I: dF = diag(2I, I), sigma_min = 1
    const int n = space->size();
    DGBlocks blocks{problem.shifted().matrix(), SparseMat(n, n), SparseMat(n, n), SparseMat(n, n)};
    const LinearizedSystem scaled(problem, blocks);
    const SigmaMinEstimate s2 = smallest_singular_value(scaled);
    CHECK(s2.converged);
    CHECK(s2.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("smallest_singular_value stable under mesh refinement at the trivial solution") {
    auto sigma_at = [](int n) {
        auto space = make_space(1, n);
        const Problem problem(space, 1.0, zero_coupling(), constant_field(space->mesh_ptr(), 1.0));
        const State flat{constant_field(space->mesh_ptr(), 0.0),
                         constant_field(space->mesh_ptr(), 1.0)};
        return smallest_singular_value(assemble_dF(problem, flat)).value;
    };
    const double s32 = sigma_at(32);
    const double s64 = sigma_at(64);
    CHECK(s32 > 0.0);
    CHECK(std::abs(s64 - s32) <= 0.1 * s32);
}

TEST_CASE("manufactured full system: newton recovers both fields at P1 rates") {
    const double lambda = 1.0;
    const ManufacturedSolution ms = manufactured_solution(1);
    auto errors = [&](int n) {
        auto space = make_space(1, n);
        const Coupling coupling = atan_coupling(1.0);
        const Field src_u = space->project(manufactured_source_u(ms, lambda, coupling));
        const Field src_m = space->project(
            manufactured_source_m(ms, lambda, [](Point) { return 1.0; }));
        const Problem problem(space, lambda, coupling, constant_field(space->mesh_ptr(), 1.0),
                              src_u, src_m);
        const auto [state, report] = newton_solve(
            problem, State{constant_field(space->mesh_ptr(), 0.0), problem.m0()});
        REQUIRE(report.converged);
        const auto [u_l2, u_h1] = error_against(state.u, ms.u, ms.du);
        const auto [m_l2, m_h1] = error_against(state.m, ms.m, ms.dm);
        (void)m_h1;
        return std::array<double, 3>{u_h1, u_l2, m_l2};
    };
    const auto e32 = errors(32);
    const auto e128 = errors(128);
    const double rate_u_h1 = std::log(e32[0] / e128[0]) / std::log(4.0);
    const double rate_u_l2 = std::log(e32[1] / e128[1]) / std::log(4.0);
    const double rate_m_l2 = std::log(e32[2] / e128[2]) / std::log(4.0);
    CHECK(rate_u_h1 >= 0.9);
    CHECK(rate_u_h1 <= 1.3);
    CHECK(rate_u_l2 >= 1.9);
    CHECK(rate_m_l2 >= 1.9);
}
