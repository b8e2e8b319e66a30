#include "mfgs/manufactured.hpp"

#include "mfgs/errors.hpp"

#include <cmath>
#include <numbers>

namespace mfgs {

namespace {
constexpr double kAmpU = 0.1;
constexpr double kAmpM = 0.3;
const double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

ManufacturedSolution manufactured_solution(int dim) {
    if (dim == 1) {
        return {
            [](Point x) { return kAmpU * std::cos(kTwoPi * x[0]); },
            [](Point x) { return 1.0 + kAmpM * std::cos(kTwoPi * x[0]); },
            [](Point x) { return Point{-kAmpU * kTwoPi * std::sin(kTwoPi * x[0]), 0.0}; },
            [](Point x) { return Point{-kAmpM * kTwoPi * std::sin(kTwoPi * x[0]), 0.0}; },
            [](Point x) { return -kAmpU * kTwoPi * kTwoPi * std::cos(kTwoPi * x[0]); },
            [](Point x) { return -kAmpM * kTwoPi * kTwoPi * std::cos(kTwoPi * x[0]); },
        };
    }
    if (dim != 2) throw ValidationError("dim", "must be 1 or 2");
    auto cc = [](Point x) { return std::cos(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]); };
    return {
        [cc](Point x) { return kAmpU * cc(x); },
        [cc](Point x) { return 1.0 + kAmpM * cc(x); },
        [](Point x) {
            return Point{-kAmpU * kTwoPi * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]),
                         -kAmpU * kTwoPi * std::cos(kTwoPi * x[0]) * std::sin(kTwoPi * x[1])};
        },
        [](Point x) {
            return Point{-kAmpM * kTwoPi * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]),
                         -kAmpM * kTwoPi * std::cos(kTwoPi * x[0]) * std::sin(kTwoPi * x[1])};
        },
        [cc](Point x) { return -2.0 * kAmpU * kTwoPi * kTwoPi * cc(x); },
        [cc](Point x) { return -2.0 * kAmpM * kTwoPi * kTwoPi * cc(x); },
    };
}

std::function<double(Point)> manufactured_source_u(const ManufacturedSolution& ms, double lambda,
                                                   const Coupling& coupling) {
    return [ms, lambda, f = coupling.eval](Point x) {
        const Point g = ms.du(x);
        return -ms.lap_u(x) + 0.5 * (g[0] * g[0] + g[1] * g[1]) + lambda * ms.u(x) - f(ms.m(x));
    };
}

std::function<double(Point)> manufactured_source_m(const ManufacturedSolution& ms, double lambda,
                                                   const std::function<double(Point)>& m0) {
    return [ms, lambda, m0](Point x) {
        const Point gu = ms.du(x);
        const Point gm = ms.dm(x);
        const double div_m_du = gm[0] * gu[0] + gm[1] * gu[1] + ms.m(x) * ms.lap_u(x);
        return -ms.lap_m(x) - div_m_du + lambda * ms.m(x) - lambda * m0(x);
    };
}

} // namespace mfgs
