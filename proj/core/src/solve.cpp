#include "mfgs/solve.hpp"

#include "mfgs/errors.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>

namespace mfgs {

namespace {

double log_rate(double e_prev, double e_next) {
    if (e_prev <= 0.0 || e_next <= 0.0 || e_prev == 1.0)
        return std::numeric_limits<double>::quiet_NaN();
    return std::log(e_next) / std::log(e_prev);
}

Vector lu_solve_refined(const Eigen::SparseLU<SparseMat>& lu, const SparseMat& A,
                        const Vector& b, const char* what) {
    Vector x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw LinearSolveError(what);
    x += lu.solve(b - A * x);
    return x;
}

} // namespace

void SolverOptions::validate() const {
    if (!(tol > 0.0)) throw ValidationError("solver.tol", "must be positive");
    if (!(damping > 0.0 && damping <= 1.0))
        throw ValidationError("solver.damping", "must lie in (0, 1]");
    if (max_iter && *max_iter < 0) throw ValidationError("solver.max_iter", "must be nonnegative");
}

std::pair<State, SolveReport> newton_solve(const Problem& problem, const State& init,
                                           const SolverOptions& opts) {
    opts.validate();
    const FemSpace& space = problem.space();
    const int budget = opts.newton_budget();

    State x = init;
    DualPair g = apply_G(problem, x);
    auto eval_residual = [&](const DualPair& loads, const State& at) {
        const auto [tu, tm] = problem.shifted().apply(loads.xi, loads.zeta);
        return add_scaled(at, 1.0, State{tu, tm});
    };
    State rx = eval_residual(g, x);
    double res = state_norm(space, rx);

    SolveReport report;
    report.residual_history.push_back(res);

    while (res > opts.tol) {
        if (report.iterations >= budget) {
            report.converged = false;
            throw MaxIterationsError("newton_solve: residual " + std::to_string(res) +
                                         " above tolerance after " + std::to_string(budget) +
                                         " iterations",
                                     report, x);
        }
        const LinearizedSystem dF = assemble_dF(problem, x);
        Vector loads(2 * space.size());
        loads.head(space.size()) = g.xi;
        loads.tail(space.size()) = g.zeta;
        const Vector rhs = -(dF.apply_shift(stack(x)) + loads);
        const Vector delta_vec = dF.solve_newton(rhs);
        State delta = unstack(problem.mesh_ptr(), delta_vec);

        double step = 1.0;
        State x_next = add_scaled(x, step, delta);
        DualPair g_next = apply_G(problem, x_next);
        State r_next = eval_residual(g_next, x_next);
        double res_next = state_norm(space, r_next);
        if (opts.line_search) {
            while (res_next >= res && step > 1.0 / 1024.0) {
                step *= 0.5;
                x_next = add_scaled(x, step, delta);
                g_next = apply_G(problem, x_next);
                r_next = eval_residual(g_next, x_next);
                res_next = state_norm(space, r_next);
            }
        }

        x = std::move(x_next);
        g = std::move(g_next);
        report.step_history.push_back(step * state_norm(space, delta));
        report.rate_estimates.push_back(log_rate(res, res_next));
        res = res_next;
        report.residual_history.push_back(res);
        ++report.iterations;
    }
    report.converged = true;
    return {std::move(x), std::move(report)};
}

std::pair<State, SolveReport> picard_solve(const Problem& problem, const Field& init_m,
                                           const SolverOptions& opts) {
    opts.validate();
    const FemSpace& space = problem.space();
    const double mass = space.mass_of(init_m);
    if (std::abs(mass - 1.0) > 1e-10)
        throw ValidationError("init_m", "discrete mass is " + std::to_string(mass) +
                                            ", expected 1");
    const int budget = opts.picard_budget();
    const double theta = opts.damping;

    Field m = init_m;
    Field u = constant_field(problem.mesh_ptr());
    SolveReport report;
    double prev_change = std::numeric_limits<double>::quiet_NaN();

    for (int k = 0; k < budget; ++k) {
        u = hjb_solve(problem, m, opts);
        const Field m_tilde = fp_solve(problem, u);
        const Field update{m.mesh, theta * (m_tilde.values - m.values)};
        const double change = space.norms(update).l2;
        m.values += update.values;
        ++report.iterations;
        report.residual_history.push_back(change);
        report.step_history.push_back(change);
        if (k > 0) report.rate_estimates.push_back(change / prev_change);
        prev_change = change;
        if (change <= opts.tol) {
            report.converged = true;
            return {State{std::move(u), std::move(m)}, std::move(report)};
        }
    }
    report.converged = false;
    throw MaxIterationsError("picard_solve: update norm still above tolerance after " +
                                 std::to_string(budget) + " iterations",
                             report, State{u, m});
}

Field hjb_solve(const Problem& problem, const Field& m_fixed, const SolverOptions& opts) {
    opts.validate();
    const FemSpace& space = problem.space();
    const PeriodicMesh& mesh = space.mesh();
    const int budget = opts.newton_budget();

    const Field f_of_m = nodal_map(m_fixed, problem.coupling().eval);
    const Vector data = space.mass() * (f_of_m.values + problem.source_u().values);

    Field u = constant_field(problem.mesh_ptr());
    for (int j = 0;; ++j) {
        const Vector grad_load = half_gradient_square_load(u);
        const Vector residual = u.values + problem.shifted().solve(grad_load - data);
        const double res = space.norms({u.mesh, residual}).h1;
        if (res <= opts.tol) break;
        if (j >= budget)
            throw MaxIterationsError("hjb_solve: residual " + std::to_string(res) +
                                         " above tolerance after " + std::to_string(budget) +
                                         " iterations",
                                     SolveReport{}, State{u, m_fixed});
        SparseMat system = problem.shifted().matrix() +
                           assemble_convection(mesh, element_gradients(u));
        system.makeCompressed();
        Eigen::SparseLU<SparseMat> lu(system);
        if (lu.info() != Eigen::Success)
            throw LinearSolveError("hjb_solve: Newton matrix is numerically singular");
        u.values = lu_solve_refined(lu, system, data + grad_load, "hjb_solve: solve failed");
    }
    return u;
}

Field fp_solve(const Problem& problem, const Field& u_fixed) {
    const FemSpace& space = problem.space();
    SparseMat system = problem.shifted().matrix() +
                       assemble_transport(space.mesh(), element_gradients(u_fixed));
    system.makeCompressed();
    Eigen::SparseLU<SparseMat> lu(system);
    if (lu.info() != Eigen::Success)
        throw LinearSolveError("fp_solve: transport system is numerically singular");
    const Vector rhs =
        space.mass() * (problem.lambda() * problem.m0().values + problem.source_m().values);
    return {problem.mesh_ptr(), lu_solve_refined(lu, system, rhs, "fp_solve: solve failed")};
}

SigmaMinEstimate smallest_singular_value(const LinearizedSystem& op, double tol, int max_iter) {
    Vector v = Vector::Ones(op.size());
    v /= v.norm();
    double mu = std::numeric_limits<double>::quiet_NaN();
    for (int it = 1; it <= max_iter; ++it) {
        const Vector w = op.solve(op.solve_transpose(v)); // (dF^T dF)^{-1} v
        const double mu_next = 1.0 / v.dot(w);            // ~ sigma_min^2
        v = w / w.norm();
        if (it > 1 && std::abs(mu_next - mu) <= tol * std::abs(mu_next))
            return {std::sqrt(mu_next), true, it};
        mu = mu_next;
    }
    return {std::sqrt(mu), false, max_iter};
}

} // namespace mfgs
