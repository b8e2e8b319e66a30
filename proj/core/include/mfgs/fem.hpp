#pragma once

#include "mfgs/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>

#include <memory>
#include <utility>

namespace mfgs {

struct FieldNorms {
    double l2;
    double h1;   // full H1: sqrt(c^T (K + M) c)
    double linf; // max nodal magnitude
};

/// P1 space on a periodic mesh with its stiffness and mass matrices cached.
/// Immutable after construction; safe to share across threads.
class FemSpace {
public:
    explicit FemSpace(std::shared_ptr<const PeriodicMesh> mesh);

    const PeriodicMesh& mesh() const { return *mesh_; }
    std::shared_ptr<const PeriodicMesh> mesh_ptr() const { return mesh_; }
    const SparseMat& stiffness() const { return stiffness_; }
    const SparseMat& mass() const { return mass_; }
    int size() const { return mesh_->node_count(); }

    FieldNorms norms(const Field& u) const;
    /// 1^T M c: the discrete mass (integral) of the field.
    double mass_of(const Field& u) const;
    /// L2 projection onto the space: solve M c = load(g). Unlike vertex
    /// interpolation this keeps the discrete mass of the projection equal to
    /// the continuous mass of g up to quadrature precision.
    Field project(const std::function<double(Point)>& g) const;
    Vector load(const std::function<double(Point)>& g) const;

private:
    std::shared_ptr<const PeriodicMesh> mesh_;
    SparseMat stiffness_;
    SparseMat mass_;
    Eigen::SimplicialLDLT<SparseMat> mass_solver_;
};

enum class LinearSolverKind { direct, conjugate_gradient };

/// The discrete solution operator S_h for -Laplace + lambda: solves
/// (K + lambda M) v = load. Factored once (sparse LDLT); a CG path with
/// relative tolerance 1e-12 is available for the symmetric solves.
class ShiftedHelmholtz {
public:
    ShiftedHelmholtz(std::shared_ptr<const FemSpace> space, double lambda,
                     LinearSolverKind kind = LinearSolverKind::direct);

    double lambda() const { return lambda_; }
    const FemSpace& space() const { return *space_; }
    const SparseMat& matrix() const { return matrix_; }

    Vector solve(const Vector& load) const;
    Field solve_field(const Vector& load) const;
    /// T_h(xi, zeta) = (S_h xi, S_h zeta), both components with the same factor.
    std::pair<Field, Field> apply(const Vector& xi, const Vector& zeta) const;

private:
    std::shared_ptr<const FemSpace> space_;
    double lambda_;
    LinearSolverKind kind_;
    SparseMat matrix_;
    Eigen::SimplicialLDLT<SparseMat> direct_;
    Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper> cg_;
};

/// One-shot T_h (assembles and factors internally; solvers cache a
/// ShiftedHelmholtz instead).
std::pair<Field, Field> apply_Th(std::shared_ptr<const FemSpace> space, double lambda,
                                 const Vector& xi, const Vector& zeta);

} // namespace mfgs
