#pragma once

#include "mfgs/solve.hpp"

namespace mfgs {

/// Discrete stability certificate for a computed equilibrium. sigma_min of
/// dF is the ground truth; the monotone and large-lambda flags are the
/// sufficient conditions (each implies stability, not the other way round).
/// K_hat = max element |Du_h| stands in for the paper-level gradient bound,
/// so the large-lambda test is checkable at the discrete level.
struct StabilityReport {
    double sigma_min = 0.0;
    bool sigma_converged = false;
    bool stable = false;            // sigma_min > threshold
    double threshold = 1e-8;
    bool monotone_condition = false; // f' >= 0
    double K_hat = 0.0;              // max element |Du|
    double M_hat = 0.0;              // 2 sup|f| + K_hat^2/2
    double Lambda_hat = 0.0;         // max{2 M_hat, K_hat^2/2 + sup|m0| sup|f'|}
    bool large_lambda_condition = false; // lambda > Lambda_hat
};

/// Requires a converged state (residual <= 1e-9). A numerically singular
/// linearization is reported as sigma_min = 0, stable = false.
StabilityReport certify_stability(const Problem& problem, const State& state,
                                  double threshold = 1e-8, double sigma_tol = 1e-6);

/// First-order correction of Proposition-style sensitivity:
/// delta = -dF[u,m]^{-1} T_h( load(f_hat(m)), lambda (load(m1) - load(m0)) ).
/// Requires a converged state with min nodal m >= 1e-6 and unit-mass m1.
State sensitivity_direction(const Problem& problem, const State& state, const Coupling& f_hat,
                            const Field& m1);

struct SensitivityResult {
    State direction;
    std::vector<std::pair<double, double>> taylor_errors; // (epsilon, remainder norm)
    double observed_order = 0.0; // log-log regression slope; NaN if remainders vanish
};

/// The perturbed instance: coupling f + eps f_hat and initial density
/// (1 - eps) m0 + eps m1 on the same space.
Problem make_perturbed_problem(const Problem& problem, const Coupling& f_hat, const Field& m1,
                               double eps);

/// For each eps, solve the perturbed system by Newton warm-started at
/// state + eps * delta and record the Taylor remainder
/// r(eps) = ||(u_eps, m_eps) - (u, m) - eps delta|| in H1 x L2.
/// Per-epsilon solver failures are recorded as NaN rows, not fatal.
SensitivityResult perturbed_taylor_check(const Problem& problem, const State& state,
                                         const Coupling& f_hat, const Field& m1,
                                         const std::vector<double>& epsilons = {1e-1, 1e-2, 1e-3},
                                         const SolverOptions& opts = {});

} // namespace mfgs
