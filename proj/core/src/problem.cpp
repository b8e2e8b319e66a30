#include "mfgs/problem.hpp"

#include "mfgs/errors.hpp"

#include <cmath>
#include <limits>

namespace mfgs {

Problem::Problem(std::shared_ptr<const FemSpace> space, double lambda, Coupling coupling,
                 Field m0, std::optional<Field> source_u, std::optional<Field> source_m)
    : space_(std::move(space)),
      lambda_(lambda),
      coupling_(std::move(coupling)),
      m0_(std::move(m0)) {
    if (!(lambda_ > 0.0)) throw ValidationError("lambda", "must be positive");
    if (m0_.size() != space_->size())
        throw ValidationError("m0", "field size does not match the mesh");

    const double min_m0 = m0_.values.minCoeff();
    if (min_m0 < -1e-10)
        throw ValidationError("m0", "projected density has nodal value " +
                                        std::to_string(min_m0) + " below -1e-10");
    for (int i = 0; i < m0_.size(); ++i) {
        if (m0_.values[i] < 0.0) {
            m0_.values[i] = 0.0;
            ++m0_clipped_;
        }
    }
    const double mass = space_->mass_of(m0_);
    if (std::abs(mass - 1.0) > 1e-12)
        throw ValidationError("m0", "discrete mass is " + std::to_string(mass) +
                                        ", expected 1 within 1e-12");

    has_sources_ = source_u.has_value() || source_m.has_value();
    source_u_ = source_u ? std::move(*source_u) : constant_field(space_->mesh_ptr());
    source_m_ = source_m ? std::move(*source_m) : constant_field(space_->mesh_ptr());
    if (source_u_.size() != space_->size())
        throw ValidationError("source_u", "field size does not match the mesh");
    if (source_m_.size() != space_->size())
        throw ValidationError("source_m", "field size does not match the mesh");

    shifted_ = std::make_shared<const ShiftedHelmholtz>(space_, lambda_);
}

State zero_state(std::shared_ptr<const PeriodicMesh> mesh) {
    return {constant_field(mesh), constant_field(mesh)};
}

State add_scaled(const State& x, double a, const State& d) {
    return {{x.u.mesh, x.u.values + a * d.u.values}, {x.m.mesh, x.m.values + a * d.m.values}};
}

double state_norm(const FemSpace& space, const State& s) {
    return space.norms(s.u).h1 + space.norms(s.m).l2;
}

double state_distance(const FemSpace& space, const State& a, const State& b) {
    return state_norm(space, add_scaled(a, -1.0, b));
}

Vector stack(const State& s) {
    Vector x(s.u.size() + s.m.size());
    x.head(s.u.size()) = s.u.values;
    x.tail(s.m.size()) = s.m.values;
    return x;
}

State unstack(std::shared_ptr<const PeriodicMesh> mesh, const Vector& x) {
    const int n = mesh->node_count();
    return {{mesh, x.head(n)}, {mesh, x.tail(n)}};
}

SolutionChecks validate_solution(const Problem& problem, const State& state) {
    SolutionChecks c{};
    const FemSpace& space = problem.space();
    c.mass_m = space.mass_of(state.m);
    c.mass_error = std::abs(c.mass_m - 1.0);

    c.u_sup = sup_norm(state.u);
    c.u_bound = (problem.coupling().sup_f + sup_norm(problem.source_u())) / problem.lambda() + 1e-8;
    c.u_bound_ok = c.u_sup <= c.u_bound;

    const Eigen::MatrixXd du = element_gradients(state.u);
    c.K_hat = du.rowwise().norm().maxCoeff();
    c.M_hat = 2.0 * problem.coupling().sup_f + 0.5 * c.K_hat * c.K_hat;

    c.m_sup = sup_norm(state.m);
    c.m_bound_applicable = problem.lambda() > c.M_hat;
    if (c.m_bound_applicable) {
        c.m_bound = problem.lambda() / (problem.lambda() - c.M_hat) * sup_norm(problem.m0()) + 1e-8;
        c.m_bound_ok = c.m_sup <= c.m_bound;
    } else {
        c.m_bound = std::numeric_limits<double>::infinity();
        c.m_bound_ok = true;
    }

    c.min_m = state.m.values.minCoeff();
    c.positivity_ok = c.min_m > -1e-10;
    return c;
}

} // namespace mfgs
