#pragma once

#include "mfgs/operators.hpp"

#include <optional>
#include <vector>

namespace mfgs {

struct SolverOptions {
    double tol = 1e-11;          // on the combined H1 x L2 residual norm
    std::optional<int> max_iter; // defaults: 50 (Newton, HJB), 500 (Picard)
    double damping = 0.5;        // Picard relaxation, in (0, 1]
    bool line_search = false;    // Newton backtracking on the residual norm

    int newton_budget() const { return max_iter.value_or(50); }
    int picard_budget() const { return max_iter.value_or(500); }
    void validate() const;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history; // includes the initial residual
    std::vector<double> step_history;
    /// log e_{k+1} / log e_k for Newton, e_{k+1} / e_k for Picard.
    std::vector<double> rate_estimates;
};

/// Iteration budget exhausted with the residual still above tolerance.
/// Carries the partial report and the last iterate.
class MaxIterationsError : public std::runtime_error {
public:
    MaxIterationsError(std::string what, SolveReport report, State last)
        : std::runtime_error(std::move(what)), report(std::move(report)), last(std::move(last)) {}

    SolveReport report;
    State last;
};

/// Full-system Newton on F(u,m) = (u,m) + T_h(G(u,m)): each step solves
/// F(x_k) + dF[x_k](x_{k+1} - x_k) = 0 through the sparse block system
/// J delta = -blkdiag(A,A) F(x_k). Converges quadratically near a stable
/// solution. Throws MaxIterationsError or LinearSolveError (a singular
/// Newton matrix is reported, never regularized away).
std::pair<State, SolveReport> newton_solve(const Problem& problem, const State& init,
                                           const SolverOptions& opts = {});

/// Damped fixed-point iteration on m -> Phi(m) = fp_solve(hjb_solve(m)):
/// m <- (1-theta) m + theta Phi(m), stopping when the L2 update size drops
/// below tol. Returns the state with u from the last HJB solve.
std::pair<State, SolveReport> picard_solve(const Problem& problem, const Field& init_m,
                                           const SolverOptions& opts = {});

/// Inner Newton for the discrete HJB at frozen density m:
/// (K + C(Du_j) + lambda M) u_{j+1} = load(f(m) + source_u + (1/2)|Du_j|^2).
Field hjb_solve(const Problem& problem, const Field& m_fixed, const SolverOptions& opts = {});

/// Single linear Fokker-Planck solve at frozen value function u:
/// (K + T(Du) + lambda M) m = lambda load(m0) + load(source_m).
/// The result carries discrete mass 1 (test function 1 kills the stiffness
/// and transport terms).
Field fp_solve(const Problem& problem, const Field& u_fixed);

struct SigmaMinEstimate {
    double value = 0.0;
    bool converged = false; // budget exhausted -> value is the last estimate
    int iterations = 0;
};

/// sigma_min(dF) by inverse power iteration on the normal equations
/// dF^T dF, deterministic all-ones start, relative accuracy tol.
SigmaMinEstimate smallest_singular_value(const LinearizedSystem& op, double tol = 1e-6,
                                         int max_iter = 500);

} // namespace mfgs
