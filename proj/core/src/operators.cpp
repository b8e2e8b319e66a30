#include "mfgs/operators.hpp"

#include "mfgs/errors.hpp"

namespace mfgs {

DualPair apply_G(const Problem& problem, const State& state) {
    const FemSpace& space = problem.space();
    const SparseMat& M = space.mass();

    const Field f_of_m = nodal_map(state.m, problem.coupling().eval);
    Vector xi = half_gradient_square_load(state.u);
    xi.noalias() -= M * (f_of_m.values + problem.source_u().values);

    Vector zeta = weighted_gradient_load(state.m, state.u);
    zeta.noalias() -= M * (problem.lambda() * problem.m0().values + problem.source_m().values);
    return {std::move(xi), std::move(zeta)};
}

State residual_F(const Problem& problem, const State& state) {
    const DualPair g = apply_G(problem, state);
    const auto [tu, tm] = problem.shifted().apply(g.xi, g.zeta);
    return add_scaled(state, 1.0, State{tu, tm});
}

DGBlocks assemble_dG(const Problem& problem, const State& state) {
    const PeriodicMesh& mesh = problem.mesh();
    const Eigen::MatrixXd du = element_gradients(state.u);
    const Field fp_of_m = nodal_map(state.m, problem.coupling().deriv);

    DGBlocks b;
    b.a11 = assemble_convection(mesh, du);
    b.a12 = -assemble_weighted_mass(mesh, fp_of_m);
    b.a21 = assemble_weighted_stiffness(mesh, state.m);
    b.a22 = assemble_transport(mesh, du);
    return b;
}

Vector apply_blocks(const DGBlocks& blocks, const Vector& x) {
    const int n = static_cast<int>(blocks.a11.rows());
    Vector y(2 * n);
    y.head(n) = blocks.a11 * x.head(n) + blocks.a12 * x.tail(n);
    y.tail(n) = blocks.a21 * x.head(n) + blocks.a22 * x.tail(n);
    return y;
}

LinearizedSystem::LinearizedSystem(const Problem& problem, DGBlocks blocks)
    : space_(problem.space_ptr()), shifted_(problem.shifted_ptr()), blocks_(std::move(blocks)) {
    const int n = space_->size();
    const SparseMat& A = shifted_->matrix();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(2 * A.nonZeros() + blocks_.a11.nonZeros() +
                                          blocks_.a12.nonZeros() + blocks_.a21.nonZeros() +
                                          blocks_.a22.nonZeros()));
    auto push = [&trip](const SparseMat& m, int row0, int col0) {
        for (int k = 0; k < m.outerSize(); ++k)
            for (SparseMat::InnerIterator it(m, k); it; ++it)
                trip.emplace_back(row0 + static_cast<int>(it.row()),
                                  col0 + static_cast<int>(it.col()), it.value());
    };
    push(A, 0, 0);
    push(A, n, n);
    push(blocks_.a11, 0, 0);
    push(blocks_.a12, 0, n);
    push(blocks_.a21, n, 0);
    push(blocks_.a22, n, n);

    newton_matrix_.resize(2 * n, 2 * n);
    newton_matrix_.setFromTriplets(trip.begin(), trip.end());
    newton_matrix_.makeCompressed();

    lu_.compute(newton_matrix_);
    if (lu_.info() != Eigen::Success)
        throw LinearSolveError("linearized system is numerically singular");
}

Vector LinearizedSystem::apply_shift(const Vector& x) const {
    const int n = space_->size();
    const SparseMat& A = shifted_->matrix();
    Vector y(2 * n);
    y.head(n) = A * x.head(n);
    y.tail(n) = A * x.tail(n);
    return y;
}

Vector LinearizedSystem::solve_shift(const Vector& x) const {
    const int n = space_->size();
    Vector y(2 * n);
    y.head(n) = shifted_->solve(x.head(n));
    y.tail(n) = shifted_->solve(x.tail(n));
    return y;
}

Vector LinearizedSystem::apply(const Vector& x) const {
    return x + solve_shift(apply_blocks(blocks_, x));
}

Vector LinearizedSystem::apply_transpose(const Vector& x) const {
    // dF^T = J^T blkdiag(A,A)^{-1} since A is symmetric
    return newton_matrix_.transpose() * solve_shift(x);
}

Vector LinearizedSystem::solve(const Vector& b) const {
    return solve_newton(apply_shift(b));
}

Vector LinearizedSystem::solve_transpose(const Vector& b) const {
    const Vector y = lu_.transpose().solve(b);
    if (lu_.info() != Eigen::Success)
        throw LinearSolveError("transpose solve on the linearized system failed");
    return apply_shift(y);
}

Vector LinearizedSystem::solve_newton(const Vector& b) const {
    Vector x = lu_.solve(b);
    if (lu_.info() != Eigen::Success)
        throw LinearSolveError("direct solve on the linearized system failed");
    x += lu_.solve(b - newton_matrix_ * x);
    return x;
}

LinearizedSystem assemble_dF(const Problem& problem, const State& state) {
    return LinearizedSystem(problem, assemble_dG(problem, state));
}

} // namespace mfgs
