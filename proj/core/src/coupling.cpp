#include "mfgs/coupling.hpp"

#include <cmath>
#include <numbers>

namespace mfgs {

Coupling zero_coupling() {
    return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; }, 0.0, 0.0, true};
}

Coupling constant_coupling(double c) {
    return {"constant", [c](double) { return c; }, [](double) { return 0.0; },
            std::abs(c), 0.0, true};
}

Coupling atan_coupling(double scale) {
    return {"atan",
            [scale](double m) { return scale * std::atan(m); },
            [scale](double m) { return scale / (1.0 + m * m); },
            std::abs(scale) * std::numbers::pi / 2.0,
            std::abs(scale),
            scale >= 0.0};
}

Coupling rational_bump_coupling(double scale) {
    return {"rational_bump",
            [scale](double m) { return scale * m / (1.0 + m * m); },
            [scale](double m) {
                const double d = 1.0 + m * m;
                return scale * (1.0 - m * m) / (d * d);
            },
            std::abs(scale) / 2.0,
            std::abs(scale),
            scale == 0.0};
}

Coupling inverse_quadratic_coupling(double scale) {
    // |f'| = |scale| * 2|m|/(1+m^2)^2 peaks at m = 1/sqrt(3) with value 3*sqrt(3)/8
    return {"inverse_quadratic",
            [scale](double m) { return scale / (1.0 + m * m); },
            [scale](double m) {
                const double d = 1.0 + m * m;
                return -2.0 * scale * m / (d * d);
            },
            std::abs(scale),
            std::abs(scale) * 3.0 * std::sqrt(3.0) / 8.0,
            scale == 0.0};
}

Coupling perturbed_coupling(const Coupling& f, const Coupling& f_hat, double eps) {
    Coupling out;
    out.name = f.name + "+" + std::to_string(eps) + "*" + f_hat.name;
    out.eval = [fe = f.eval, he = f_hat.eval, eps](double m) { return fe(m) + eps * he(m); };
    out.deriv = [fd = f.deriv, hd = f_hat.deriv, eps](double m) { return fd(m) + eps * hd(m); };
    out.sup_f = f.sup_f + std::abs(eps) * f_hat.sup_f;
    out.sup_fp = f.sup_fp + std::abs(eps) * f_hat.sup_fp;
    out.monotone = f.monotone && f_hat.monotone && eps >= 0.0;
    return out;
}

} // namespace mfgs
