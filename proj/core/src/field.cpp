#include "mfgs/field.hpp"

#include <cmath>

namespace mfgs {

Field constant_field(std::shared_ptr<const PeriodicMesh> mesh, double value) {
    const int n = mesh->node_count();
    return {std::move(mesh), Vector::Constant(n, value)};
}

Field nodal_field(std::shared_ptr<const PeriodicMesh> mesh,
                  const std::function<double(Point)>& f) {
    Vector v(mesh->node_count());
    for (int i = 0; i < mesh->node_count(); ++i) v[i] = f(mesh->node(i));
    return {std::move(mesh), std::move(v)};
}

Field nodal_map(const Field& u, const std::function<double(double)>& f) {
    Vector v(u.size());
    for (int i = 0; i < u.size(); ++i) v[i] = f(u.values[i]);
    return {u.mesh, std::move(v)};
}

double interpolate(const Field& u, Point x) {
    const auto loc = u.mesh->locate(x);
    const Element& el = u.mesh->element(loc.element);
    double value = 0.0;
    for (int k = 0; k < u.mesh->nodes_per_element(); ++k)
        value += loc.barycentric[static_cast<std::size_t>(k)] * u.values[el.nodes[static_cast<std::size_t>(k)]];
    return value;
}

Eigen::MatrixXd element_gradients(const Field& u) {
    const PeriodicMesh& mesh = *u.mesh;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(mesh.element_count(), 2);
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Element& el = mesh.element(e);
        const auto grads = mesh.basis_gradients(e);
        double gx = 0.0, gy = 0.0;
        for (int k = 0; k < mesh.nodes_per_element(); ++k) {
            const double c = u.values[el.nodes[static_cast<std::size_t>(k)]];
            gx += c * grads[static_cast<std::size_t>(k)][0];
            gy += c * grads[static_cast<std::size_t>(k)][1];
        }
        g(e, 0) = gx;
        g(e, 1) = gy;
    }
    return g;
}

double sup_norm(const Field& u) {
    return u.size() == 0 ? 0.0 : u.values.cwiseAbs().maxCoeff();
}

} // namespace mfgs
