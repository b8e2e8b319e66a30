#include "mfgs/mesh.hpp"

#include "mfgs/errors.hpp"

#include <cmath>

namespace mfgs {

namespace {

double wrap_unit(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0; // guards x = -1e-17 rounding to 1.0
    return y;
}

} // namespace

PeriodicMesh::PeriodicMesh(int dim, int n) : dim_(dim), n_(n), h_(1.0 / n) {
    if (dim != 1 && dim != 2) throw ValidationError("dim", "must be 1 or 2");
    if (n < 2) throw ValidationError("n", "must be at least 2");

    if (dim_ == 1) {
        node_count_ = n_;
        elements_.reserve(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            Element e;
            e.nodes = {i, (i + 1) % n_, -1};
            e.vertices[0] = {i * h_, 0.0};
            e.vertices[1] = {(i + 1) * h_, 0.0}; // unwrapped: may equal 1.0
            e.measure = h_;
            elements_.push_back(e);
        }
    } else {
        node_count_ = n_ * n_;
        elements_.reserve(static_cast<std::size_t>(2 * n_ * n_));
        auto id = [this](int i, int j) { return (j % n_) * n_ + (i % n_); };
        for (int j = 0; j < n_; ++j) {
            for (int i = 0; i < n_; ++i) {
                const Point p00{i * h_, j * h_};
                const Point p10{(i + 1) * h_, j * h_};
                const Point p01{i * h_, (j + 1) * h_};
                const Point p11{(i + 1) * h_, (j + 1) * h_};
                // diagonal p00 -> p11, lower triangle first
                Element lo;
                lo.nodes = {id(i, j), id(i + 1, j), id(i + 1, j + 1)};
                lo.vertices = {p00, p10, p11};
                lo.measure = 0.5 * h_ * h_;
                elements_.push_back(lo);
                Element hi;
                hi.nodes = {id(i, j), id(i + 1, j + 1), id(i, j + 1)};
                hi.vertices = {p00, p11, p01};
                hi.measure = 0.5 * h_ * h_;
                elements_.push_back(hi);
            }
        }
    }
}

Point PeriodicMesh::node(int i) const {
    if (dim_ == 1) return {i * h_, 0.0};
    return {(i % n_) * h_, (i / n_) * h_};
}

Point PeriodicMesh::wrap(Point x) const {
    if (dim_ == 1) return {wrap_unit(x[0]), 0.0};
    return {wrap_unit(x[0]), wrap_unit(x[1])};
}

PeriodicMesh::Location PeriodicMesh::locate(Point x) const {
    const Point w = wrap(x);
    const int i = std::min(static_cast<int>(w[0] / h_), n_ - 1);
    if (dim_ == 1) {
        const double s = w[0] / h_ - i;
        return {i, {1.0 - s, s, 0.0}};
    }
    const int j = std::min(static_cast<int>(w[1] / h_), n_ - 1);
    const double s = w[0] / h_ - i;
    const double t = w[1] / h_ - j;
    const int square = 2 * (j * n_ + i);
    if (t <= s) {
        // lower triangle (p00, p10, p11): barycentric (1-s, s-t, t)
        return {square, {1.0 - s, s - t, t}};
    }
    // upper triangle (p00, p11, p01): barycentric (1-t, s, t-s)
    return {square + 1, {1.0 - t, s, t - s}};
}

std::array<Point, 3> PeriodicMesh::basis_gradients(int e) const {
    const Element& el = elements_[static_cast<std::size_t>(e)];
    if (dim_ == 1) {
        const double inv = 1.0 / (el.vertices[1][0] - el.vertices[0][0]);
        return {Point{-inv, 0.0}, Point{inv, 0.0}, Point{0.0, 0.0}};
    }
    const Point& a = el.vertices[0];
    const Point& b = el.vertices[1];
    const Point& c = el.vertices[2];
    const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    const double inv = 1.0 / det;
    return {
        Point{(b[1] - c[1]) * inv, (c[0] - b[0]) * inv},
        Point{(c[1] - a[1]) * inv, (a[0] - c[0]) * inv},
        Point{(a[1] - b[1]) * inv, (b[0] - a[0]) * inv},
    };
}

std::shared_ptr<const PeriodicMesh> build_mesh(int dim, int n) {
    return std::make_shared<const PeriodicMesh>(dim, n);
}

} // namespace mfgs
