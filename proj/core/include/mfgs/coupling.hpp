#pragma once

#include <functional>
#include <string>

namespace mfgs {

/// The coupling f through which the density enters the agents' cost,
/// together with analytic bounds used by the a-priori estimates and the
/// stability certificate. `monotone` asserts f' >= 0 (the Lasry-Lions
/// uniqueness regime).
struct Coupling {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    double sup_f = 0.0;  // bound on |f|
    double sup_fp = 0.0; // bound on |f'|
    bool monotone = false;
};

Coupling zero_coupling();
Coupling constant_coupling(double c);
/// f(m) = scale * atan(m): smooth, bounded, monotone iff scale >= 0.
Coupling atan_coupling(double scale);
/// f(m) = scale * m / (1 + m^2): bounded, non-monotone.
Coupling rational_bump_coupling(double scale);
/// f(m) = scale / (1 + m^2): bounded perturbation family for sensitivity runs.
Coupling inverse_quadratic_coupling(double scale);

/// f + eps * f_hat, with the conservative bound combination. Passing the
/// same objects with eps = 0 returns f evaluated unchanged.
Coupling perturbed_coupling(const Coupling& f, const Coupling& f_hat, double eps);

} // namespace mfgs
