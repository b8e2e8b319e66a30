#include "mfgs/fem.hpp"

#include "mfgs/errors.hpp"

#include <cmath>

namespace mfgs {

FemSpace::FemSpace(std::shared_ptr<const PeriodicMesh> mesh)
    : mesh_(std::move(mesh)),
      stiffness_(assemble_stiffness(*mesh_)),
      mass_(assemble_mass(*mesh_)) {
    mass_solver_.compute(mass_);
    if (mass_solver_.info() != Eigen::Success)
        throw LinearSolveError("mass matrix factorization failed");
}

FieldNorms FemSpace::norms(const Field& u) const {
    const Vector& c = u.values;
    const double l2_sq = c.dot(mass_ * c);
    const double h1_sq = l2_sq + c.dot(stiffness_ * c);
    return {std::sqrt(std::max(l2_sq, 0.0)), std::sqrt(std::max(h1_sq, 0.0)), sup_norm(u)};
}

double FemSpace::mass_of(const Field& u) const {
    return (mass_ * u.values).sum();
}

Field FemSpace::project(const std::function<double(Point)>& g) const {
    Vector c = mass_solver_.solve(load(g));
    return {mesh_, std::move(c)};
}

Vector FemSpace::load(const std::function<double(Point)>& g) const {
    return load_vector(*mesh_, g);
}

ShiftedHelmholtz::ShiftedHelmholtz(std::shared_ptr<const FemSpace> space, double lambda,
                                   LinearSolverKind kind)
    : space_(std::move(space)), lambda_(lambda), kind_(kind) {
    if (!(lambda > 0.0)) throw ValidationError("lambda", "must be positive");
    matrix_ = space_->stiffness() + lambda_ * space_->mass();
    matrix_.makeCompressed();
    if (kind_ == LinearSolverKind::direct) {
        direct_.compute(matrix_);
        if (direct_.info() != Eigen::Success)
            throw LinearSolveError("shifted Helmholtz factorization failed");
    } else {
        cg_.setTolerance(1e-12);
        cg_.compute(matrix_);
    }
}

Vector ShiftedHelmholtz::solve(const Vector& load) const {
    if (kind_ == LinearSolverKind::direct) {
        Vector x = direct_.solve(load);
        // one step of iterative refinement keeps residuals near round-off
        x += direct_.solve(load - matrix_ * x);
        return x;
    }
    Vector x = cg_.solve(load);
    if (cg_.info() != Eigen::Success)
        throw LinearSolveError("shifted Helmholtz CG did not converge");
    return x;
}

Field ShiftedHelmholtz::solve_field(const Vector& load) const {
    return {space_->mesh_ptr(), solve(load)};
}

std::pair<Field, Field> ShiftedHelmholtz::apply(const Vector& xi, const Vector& zeta) const {
    return {solve_field(xi), solve_field(zeta)};
}

std::pair<Field, Field> apply_Th(std::shared_ptr<const FemSpace> space, double lambda,
                                 const Vector& xi, const Vector& zeta) {
    const ShiftedHelmholtz op(std::move(space), lambda);
    return op.apply(xi, zeta);
}

} // namespace mfgs
