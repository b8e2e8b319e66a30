#pragma once

#include "mfgs/coupling.hpp"
#include "mfgs/mesh.hpp"

#include <functional>

namespace mfgs {

/// A smooth exact pair used to verify discretization order: sources are
/// chosen so that (u*, m*) solves the forced system exactly.
/// 1D: u* = 0.1 cos(2 pi x),           m* = 1 + 0.3 cos(2 pi x)
/// 2D: u* = 0.1 cos(2 pi x)cos(2 pi y), m* = 1 + 0.3 cos(2 pi x)cos(2 pi y)
/// Both densities have unit mass, so the forced mass identity is preserved.
struct ManufacturedSolution {
    std::function<double(Point)> u, m;
    std::function<Point(Point)> du, dm;
    std::function<double(Point)> lap_u, lap_m;
};

ManufacturedSolution manufactured_solution(int dim);

/// source_u = -lap u* + (1/2)|Du*|^2 + lambda u* - f(m*)
std::function<double(Point)> manufactured_source_u(const ManufacturedSolution& ms, double lambda,
                                                   const Coupling& coupling);

/// source_m = -lap m* - div(m* Du*) + lambda m* - lambda m0
std::function<double(Point)> manufactured_source_m(const ManufacturedSolution& ms, double lambda,
                                                   const std::function<double(Point)>& m0);

} // namespace mfgs
