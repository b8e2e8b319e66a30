#pragma once

#include "mfgs/field.hpp"

#include <Eigen/Sparse>

#include <functional>

namespace mfgs {

using SparseMat = Eigen::SparseMatrix<double>;

// All assembly below integrates its polynomial integrands exactly (the
// highest degree is the cubic of a weighted mass matrix) and runs in a fixed
// element order, so repeated runs produce bitwise-identical matrices. No
// mass lumping anywhere.

/// K(i,j) = int Dphi_j . Dphi_i. Symmetric PSD, kernel = constants, zero row sums.
SparseMat assemble_stiffness(const PeriodicMesh& mesh);

/// M(i,j) = int phi_j phi_i. Symmetric PD; entries sum to 1 on the unit torus.
SparseMat assemble_mass(const PeriodicMesh& mesh);

/// C(i,j) = int (b . Dphi_j) phi_i with per-element constant drift rows b.
SparseMat assemble_convection(const PeriodicMesh& mesh, const Eigen::MatrixXd& drift);

/// Same with P1 drift components (d fields).
SparseMat assemble_convection(const PeriodicMesh& mesh, const std::vector<Field>& drift);

/// T(i,j) = int phi_j (b . Dphi_i): the weak divergence form, transpose
/// structure of assemble_convection. Assembled by its own loop rather than
/// by transposing, so the transpose identity stays testable.
SparseMat assemble_transport(const PeriodicMesh& mesh, const Eigen::MatrixXd& drift);
SparseMat assemble_transport(const PeriodicMesh& mesh, const std::vector<Field>& drift);

/// Kw(i,j) = int w Dphi_j . Dphi_i with P1 weight w.
SparseMat assemble_weighted_stiffness(const PeriodicMesh& mesh, const Field& w);

/// Mw(i,j) = int w phi_j phi_i with P1 weight w (cubic integrand, exact).
SparseMat assemble_weighted_mass(const PeriodicMesh& mesh, const Field& w);

/// r_i = int w Dv . Dphi_i for P1 fields w, v.
Vector weighted_gradient_load(const Field& w, const Field& v);

/// l_i = int (1/2)|Du|^2 phi_i (|Du| is constant per element).
Vector half_gradient_square_load(const Field& u);

/// l_i = int g phi_i with a high-order quadrature per element (Gauss-8 in
/// 1D, a Duffy 8x8 tensor rule per triangle in 2D). Used for data functions
/// such as m0 and manufactured sources, where near-exact loads keep the
/// discrete mass identity at machine precision.
Vector load_vector(const PeriodicMesh& mesh, const std::function<double(Point)>& g);

/// Quadrature errors of a P1 field against an exact solution:
/// returns {L2 error, full H1 error} of u_h - u_exact.
std::pair<double, double> error_against(const Field& u,
                                        const std::function<double(Point)>& exact,
                                        const std::function<Point(Point)>& exact_gradient);

} // namespace mfgs
