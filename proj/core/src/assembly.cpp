#include "mfgs/assembly.hpp"

#include <cmath>

namespace mfgs {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Exact integrals of barycentric monomials over one element:
//   1D interval:  int l_a^p l_b^q = p! q! / (p+q+1)! * h
//   2D triangle:  int l_a^p l_b^q l_c^r = p! q! r! / (p+q+r+2)! * 2A
// The few cases needed for P1 products are spelled out below.

// int phi_i phi_j over one element, divided by the element measure.
double mass_coeff(int dim, int i, int j) {
    if (dim == 1) return i == j ? 1.0 / 3.0 : 1.0 / 6.0;
    return i == j ? 1.0 / 6.0 : 1.0 / 12.0;
}

// int phi_i phi_j phi_k over one element, divided by the element measure.
double triple_coeff(int dim, int i, int j, int k) {
    if (dim == 1) return (i == j && j == k) ? 1.0 / 4.0 : 1.0 / 12.0;
    if (i == j && j == k) return 1.0 / 10.0;
    if (i == j || j == k || i == k) return 1.0 / 30.0;
    return 1.0 / 60.0;
}

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }

SparseMat from_triplets(int n, Triplets& trip) {
    SparseMat m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

template <typename PerElement>
SparseMat assemble(const PeriodicMesh& mesh, PerElement&& local) {
    const int nv = mesh.nodes_per_element();
    Triplets trip;
    trip.reserve(static_cast<std::size_t>(mesh.element_count() * nv * nv));
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Element& el = mesh.element(e);
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j) {
                const double v = local(e, i, j);
                trip.emplace_back(el.nodes[static_cast<std::size_t>(i)],
                                  el.nodes[static_cast<std::size_t>(j)], v);
            }
    }
    return from_triplets(mesh.node_count(), trip);
}

} // namespace

SparseMat assemble_stiffness(const PeriodicMesh& mesh) {
    return assemble(mesh, [&](int e, int i, int j) {
        const auto g = mesh.basis_gradients(e);
        return mesh.element(e).measure *
               dot(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
    });
}

SparseMat assemble_mass(const PeriodicMesh& mesh) {
    return assemble(mesh, [&](int e, int i, int j) {
        return mesh.element(e).measure * mass_coeff(mesh.dim(), i, j);
    });
}

SparseMat assemble_convection(const PeriodicMesh& mesh, const Eigen::MatrixXd& drift) {
    const double inv = 1.0 / (mesh.dim() + 1);
    return assemble(mesh, [&](int e, int i, int j) {
        (void)i;
        const auto g = mesh.basis_gradients(e);
        const Point b{drift(e, 0), drift(e, 1)};
        return dot(b, g[static_cast<std::size_t>(j)]) * mesh.element(e).measure * inv;
    });
}

SparseMat assemble_convection(const PeriodicMesh& mesh, const std::vector<Field>& drift) {
    const int nv = mesh.nodes_per_element();
    return assemble(mesh, [&](int e, int i, int j) {
        const Element& el = mesh.element(e);
        const auto g = mesh.basis_gradients(e);
        // int (b . Dphi_j) phi_i = Dphi_j . int b phi_i, b componentwise P1
        Point ib{0.0, 0.0};
        for (int k = 0; k < nv; ++k) {
            const double c = el.measure * mass_coeff(mesh.dim(), i, k);
            const int node = el.nodes[static_cast<std::size_t>(k)];
            for (std::size_t d = 0; d < drift.size(); ++d) ib[d] += c * drift[d].values[node];
        }
        return dot(ib, g[static_cast<std::size_t>(j)]);
    });
}

SparseMat assemble_transport(const PeriodicMesh& mesh, const Eigen::MatrixXd& drift) {
    const double inv = 1.0 / (mesh.dim() + 1);
    return assemble(mesh, [&](int e, int i, int j) {
        (void)j;
        const auto g = mesh.basis_gradients(e);
        const Point b{drift(e, 0), drift(e, 1)};
        return dot(b, g[static_cast<std::size_t>(i)]) * mesh.element(e).measure * inv;
    });
}

SparseMat assemble_transport(const PeriodicMesh& mesh, const std::vector<Field>& drift) {
    const int nv = mesh.nodes_per_element();
    return assemble(mesh, [&](int e, int i, int j) {
        const Element& el = mesh.element(e);
        const auto g = mesh.basis_gradients(e);
        Point jb{0.0, 0.0};
        for (int k = 0; k < nv; ++k) {
            const double c = el.measure * mass_coeff(mesh.dim(), j, k);
            const int node = el.nodes[static_cast<std::size_t>(k)];
            for (std::size_t d = 0; d < drift.size(); ++d) jb[d] += c * drift[d].values[node];
        }
        return dot(jb, g[static_cast<std::size_t>(i)]);
    });
}

SparseMat assemble_weighted_stiffness(const PeriodicMesh& mesh, const Field& w) {
    const int nv = mesh.nodes_per_element();
    return assemble(mesh, [&](int e, int i, int j) {
        const Element& el = mesh.element(e);
        const auto g = mesh.basis_gradients(e);
        double mean = 0.0;
        for (int k = 0; k < nv; ++k) mean += w.values[el.nodes[static_cast<std::size_t>(k)]];
        mean /= nv;
        return mean * el.measure *
               dot(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
    });
}

SparseMat assemble_weighted_mass(const PeriodicMesh& mesh, const Field& w) {
    const int nv = mesh.nodes_per_element();
    return assemble(mesh, [&](int e, int i, int j) {
        const Element& el = mesh.element(e);
        double v = 0.0;
        for (int k = 0; k < nv; ++k)
            v += w.values[el.nodes[static_cast<std::size_t>(k)]] *
                 triple_coeff(mesh.dim(), i, j, k);
        return v * el.measure;
    });
}

Vector weighted_gradient_load(const Field& w, const Field& v) {
    const PeriodicMesh& mesh = *w.mesh;
    const int nv = mesh.nodes_per_element();
    const Eigen::MatrixXd dv = element_gradients(v);
    Vector r = Vector::Zero(mesh.node_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Element& el = mesh.element(e);
        const auto g = mesh.basis_gradients(e);
        double mean = 0.0;
        for (int k = 0; k < nv; ++k) mean += w.values[el.nodes[static_cast<std::size_t>(k)]];
        mean /= nv;
        const Point grad_v{dv(e, 0), dv(e, 1)};
        for (int i = 0; i < nv; ++i)
            r[el.nodes[static_cast<std::size_t>(i)]] +=
                mean * el.measure * dot(grad_v, g[static_cast<std::size_t>(i)]);
    }
    return r;
}

Vector half_gradient_square_load(const Field& u) {
    const PeriodicMesh& mesh = *u.mesh;
    const int nv = mesh.nodes_per_element();
    const Eigen::MatrixXd du = element_gradients(u);
    Vector r = Vector::Zero(mesh.node_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Element& el = mesh.element(e);
        const double half_sq = 0.5 * (du(e, 0) * du(e, 0) + du(e, 1) * du(e, 1));
        const double v = half_sq * el.measure / nv; // int phi_i = measure/(d+1)
        for (int i = 0; i < nv; ++i) r[el.nodes[static_cast<std::size_t>(i)]] += v;
    }
    return r;
}

namespace {

// 8-point Gauss-Legendre rule on [0,1].
constexpr int kGaussN = 8;
constexpr double kGaussX[kGaussN] = {
    0.019855071751231884, 0.10166676129318664, 0.2372337950418355, 0.40828267875217505,
    0.591717321247825,    0.7627662049581645,  0.8983332387068134, 0.9801449282487681};
constexpr double kGaussW[kGaussN] = {
    0.05061426814518813, 0.11119051722668723, 0.15685332293894372, 0.18134189168918097,
    0.18134189168918097, 0.15685332293894372, 0.11119051722668723, 0.05061426814518813};

// Per-element quadrature: calls back with physical point, barycentric
// coordinates, and weight (already scaled by the element Jacobian).
template <typename F>
void for_quadrature(const PeriodicMesh& mesh, int e, F&& fn) {
    const Element& el = mesh.element(e);
    if (mesh.dim() == 1) {
        const double a = el.vertices[0][0];
        const double h = el.vertices[1][0] - a;
        for (int q = 0; q < kGaussN; ++q) {
            const double s = kGaussX[q];
            fn(Point{a + s * h, 0.0}, std::array<double, 3>{1.0 - s, s, 0.0}, kGaussW[q] * h);
        }
        return;
    }
    // Duffy transform of the [0,1]^2 tensor rule onto the triangle
    const Point& p0 = el.vertices[0];
    const Point& p1 = el.vertices[1];
    const Point& p2 = el.vertices[2];
    const double two_area = 2.0 * el.measure;
    for (int qa = 0; qa < kGaussN; ++qa) {
        const double xi = kGaussX[qa];
        for (int qb = 0; qb < kGaussN; ++qb) {
            const double eta = kGaussX[qb];
            const std::array<double, 3> bary{1.0 - xi, xi * (1.0 - eta), xi * eta};
            const Point x{bary[0] * p0[0] + bary[1] * p1[0] + bary[2] * p2[0],
                          bary[0] * p0[1] + bary[1] * p1[1] + bary[2] * p2[1]};
            fn(x, bary, kGaussW[qa] * kGaussW[qb] * two_area * xi);
        }
    }
}

} // namespace

Vector load_vector(const PeriodicMesh& mesh, const std::function<double(Point)>& g) {
    const int nv = mesh.nodes_per_element();
    Vector r = Vector::Zero(mesh.node_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Element& el = mesh.element(e);
        for_quadrature(mesh, e, [&](Point x, const std::array<double, 3>& bary, double w) {
            const double gv = g(x);
            for (int i = 0; i < nv; ++i)
                r[el.nodes[static_cast<std::size_t>(i)]] += w * gv * bary[static_cast<std::size_t>(i)];
        });
    }
    return r;
}

std::pair<double, double> error_against(const Field& u,
                                        const std::function<double(Point)>& exact,
                                        const std::function<Point(Point)>& exact_gradient) {
    const PeriodicMesh& mesh = *u.mesh;
    const int nv = mesh.nodes_per_element();
    const Eigen::MatrixXd du = element_gradients(u);
    double l2_sq = 0.0;
    double semi_sq = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const Element& el = mesh.element(e);
        const Point grad_h{du(e, 0), du(e, 1)};
        for_quadrature(mesh, e, [&](Point x, const std::array<double, 3>& bary, double w) {
            double uh = 0.0;
            for (int i = 0; i < nv; ++i)
                uh += bary[static_cast<std::size_t>(i)] * u.values[el.nodes[static_cast<std::size_t>(i)]];
            const double dv = uh - exact(x);
            const Point ge = exact_gradient(x);
            const double gx = grad_h[0] - ge[0];
            const double gy = grad_h[1] - ge[1];
            l2_sq += w * dv * dv;
            semi_sq += w * (gx * gx + gy * gy);
        });
    }
    return {std::sqrt(l2_sq), std::sqrt(l2_sq + semi_sq)};
}

} // namespace mfgs
