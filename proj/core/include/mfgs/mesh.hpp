#pragma once

#include <array>
#include <memory>
#include <vector>

namespace mfgs {

/// A point on the torus [0,1)^d. The second coordinate is unused (zero) in 1D.
using Point = std::array<double, 2>;

/// One simplex of the triangulation: node indices plus the unwrapped vertex
/// coordinates. Elements touching the periodic seam reference vertex
/// coordinates outside [0,1) so the element geometry stays affine.
struct Element {
    std::array<int, 3> nodes{-1, -1, -1};
    std::array<Point, 3> vertices{};
    double measure = 0.0;
};

/// Uniform periodic triangulation of the unit torus in dimension 1 or 2.
///
/// 1D: n intervals of width h = 1/n, nodes at i*h.
/// 2D: n x n squares, each split along the lower-left -> upper-right
/// diagonal into two triangles of area h^2/2 (fixed orientation so assembly
/// is reproducible). Nodes on opposite faces are identified, so there are
/// exactly n^d nodes.
class PeriodicMesh {
public:
    PeriodicMesh(int dim, int n);

    int dim() const { return dim_; }
    int cells_per_axis() const { return n_; }
    double width() const { return h_; }
    int node_count() const { return node_count_; }
    int element_count() const { return static_cast<int>(elements_.size()); }
    int nodes_per_element() const { return dim_ + 1; }

    const Element& element(int e) const { return elements_[static_cast<std::size_t>(e)]; }
    const std::vector<Element>& elements() const { return elements_; }
    Point node(int i) const;

    /// Wrap an arbitrary point into [0,1)^d.
    Point wrap(Point x) const;

    /// Element containing the (wrapped) point, plus its barycentric weights.
    struct Location {
        int element;
        std::array<double, 3> barycentric;
    };
    Location locate(Point x) const;

    /// Constant gradients of the element's P1 basis functions, one per vertex.
    std::array<Point, 3> basis_gradients(int e) const;

private:
    int dim_;
    int n_;
    double h_;
    int node_count_;
    std::vector<Element> elements_;
};

/// Validating factory: dim must be 1 or 2 and n >= 2.
std::shared_ptr<const PeriodicMesh> build_mesh(int dim, int n);

} // namespace mfgs
