#pragma once

#include "mfgs/mesh.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>

namespace mfgs {

using Vector = Eigen::VectorXd;

/// Nodal coefficients of a continuous piecewise-linear function on a
/// periodic mesh. Treated as immutable once built.
struct Field {
    std::shared_ptr<const PeriodicMesh> mesh;
    Vector values;

    int size() const { return static_cast<int>(values.size()); }
};

/// Zero (or constant) field on a mesh.
Field constant_field(std::shared_ptr<const PeriodicMesh> mesh, double value = 0.0);

/// Vertex interpolant of a scalar function.
Field nodal_field(std::shared_ptr<const PeriodicMesh> mesh,
                  const std::function<double(Point)>& f);

/// Nodal map: g_i = f(u_i). Used for coupling terms f(m), f'(m).
Field nodal_map(const Field& u, const std::function<double(double)>& f);

/// Value of the piecewise-linear interpolant at x (x is wrapped into the
/// torus first, so every point is interior). Exact at nodes.
double interpolate(const Field& u, Point x);

/// Per-element constant gradients, one row per element ((du/dx, du/dy),
/// second column zero in 1D).
Eigen::MatrixXd element_gradients(const Field& u);

/// max_i |u_i|: the sup norm of a P1 function is attained at a vertex.
double sup_norm(const Field& u);

} // namespace mfgs
