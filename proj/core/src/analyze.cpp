#include "mfgs/analyze.hpp"

#include "mfgs/errors.hpp"

#include <cmath>
#include <limits>

namespace mfgs {

namespace {

void require_converged(const Problem& problem, const State& state, const char* who) {
    const double res = state_norm(problem.space(), residual_F(problem, state));
    if (res > 1e-9)
        throw ValidationError("state", std::string(who) + " needs a converged solution; residual is " +
                                           std::to_string(res));
}

} // namespace

StabilityReport certify_stability(const Problem& problem, const State& state, double threshold,
                                  double sigma_tol) {
    require_converged(problem, state, "certify_stability");

    StabilityReport r;
    r.threshold = threshold;
    r.monotone_condition = problem.coupling().monotone;

    const Eigen::MatrixXd du = element_gradients(state.u);
    r.K_hat = du.rowwise().norm().maxCoeff();
    r.M_hat = 2.0 * problem.coupling().sup_f + 0.5 * r.K_hat * r.K_hat;
    r.Lambda_hat = std::max(2.0 * r.M_hat,
                            0.5 * r.K_hat * r.K_hat +
                                sup_norm(problem.m0()) * problem.coupling().sup_fp);
    r.large_lambda_condition = problem.lambda() > r.Lambda_hat;

    try {
        const LinearizedSystem dF = assemble_dF(problem, state);
        const SigmaMinEstimate sigma = smallest_singular_value(dF, sigma_tol);
        r.sigma_min = sigma.value;
        r.sigma_converged = sigma.converged;
        r.stable = r.sigma_min > threshold;
    } catch (const LinearSolveError&) {
        r.sigma_min = 0.0;
        r.sigma_converged = true;
        r.stable = false;
    }
    return r;
}

State sensitivity_direction(const Problem& problem, const State& state, const Coupling& f_hat,
                            const Field& m1) {
    require_converged(problem, state, "sensitivity_direction");
    const FemSpace& space = problem.space();
    if (std::abs(space.mass_of(m1) - 1.0) > 1e-10)
        throw ValidationError("m1", "perturbation density must have unit discrete mass");
    if (state.m.values.minCoeff() < 1e-6)
        throw ValidationError("state", "sensitivity needs min nodal m >= 1e-6 "
                                       "(f_hat lives on the positive half-line)");

    const Field fhat_of_m = nodal_map(state.m, f_hat.eval);
    const Vector xi = space.mass() * fhat_of_m.values;
    const Vector zeta = problem.lambda() * (space.mass() * (m1.values - problem.m0().values));
    const auto [tu, tm] = problem.shifted().apply(xi, zeta);

    const LinearizedSystem dF = assemble_dF(problem, state);
    const Vector delta = dF.solve(-stack(State{tu, tm}));
    return unstack(problem.mesh_ptr(), delta);
}

Problem make_perturbed_problem(const Problem& problem, const Coupling& f_hat, const Field& m1,
                               double eps) {
    Field m0_eps{problem.mesh_ptr(),
                 problem.m0().values + eps * (m1.values - problem.m0().values)};
    std::optional<Field> su, sm;
    if (problem.has_sources()) {
        su = problem.source_u();
        sm = problem.source_m();
    }
    return Problem(problem.space_ptr(), problem.lambda(),
                   perturbed_coupling(problem.coupling(), f_hat, eps), std::move(m0_eps),
                   std::move(su), std::move(sm));
}

SensitivityResult perturbed_taylor_check(const Problem& problem, const State& state,
                                         const Coupling& f_hat, const Field& m1,
                                         const std::vector<double>& epsilons,
                                         const SolverOptions& opts) {
    SensitivityResult result;
    result.direction = sensitivity_direction(problem, state, f_hat, m1);

    for (const double eps : epsilons) {
        if (!(eps > 0.0)) throw ValidationError("epsilons", "must be positive");
        const Problem perturbed = make_perturbed_problem(problem, f_hat, m1, eps);
        const State warm = add_scaled(state, eps, result.direction);
        double remainder = std::numeric_limits<double>::quiet_NaN();
        try {
            const auto [solution, report] = newton_solve(perturbed, warm, opts);
            remainder = state_distance(problem.space(), solution, warm);
        } catch (const MaxIterationsError&) {
            // recorded as NaN; the batch continues
        }
        result.taylor_errors.emplace_back(eps, remainder);
    }

    // log-log least squares over the entries with positive remainder
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (const auto& [eps, r] : result.taylor_errors) {
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        const double x = std::log(eps), y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    result.observed_order = k >= 2 ? (k * sxy - sx * sy) / (k * sxx - sx * sx)
                                   : std::numeric_limits<double>::quiet_NaN();
    return result;
}

} // namespace mfgs
