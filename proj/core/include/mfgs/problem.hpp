#pragma once

#include "mfgs/coupling.hpp"
#include "mfgs/fem.hpp"

#include <memory>
#include <optional>

namespace mfgs {

/// One MFG instance: discount lambda, projected initial density m0, the
/// coupling f, and optional manufactured forcings (zero by default, in which
/// case the plain system is recovered). Owns the factored shifted Helmholtz
/// operator shared by every solve on this problem. Immutable.
class Problem {
public:
    Problem(std::shared_ptr<const FemSpace> space, double lambda, Coupling coupling, Field m0,
            std::optional<Field> source_u = std::nullopt,
            std::optional<Field> source_m = std::nullopt);

    const FemSpace& space() const { return *space_; }
    std::shared_ptr<const FemSpace> space_ptr() const { return space_; }
    const PeriodicMesh& mesh() const { return space_->mesh(); }
    std::shared_ptr<const PeriodicMesh> mesh_ptr() const { return space_->mesh_ptr(); }
    double lambda() const { return lambda_; }
    const Coupling& coupling() const { return coupling_; }
    const Field& m0() const { return m0_; }
    const Field& source_u() const { return source_u_; }
    const Field& source_m() const { return source_m_; }
    bool has_sources() const { return has_sources_; }
    const ShiftedHelmholtz& shifted() const { return *shifted_; }
    std::shared_ptr<const ShiftedHelmholtz> shifted_ptr() const { return shifted_; }

    /// Number of m0 nodal values in [-1e-10, 0) clipped to zero during
    /// validation (tolerated and reported, never silent).
    int m0_clipped() const { return m0_clipped_; }

private:
    std::shared_ptr<const FemSpace> space_;
    double lambda_;
    Coupling coupling_;
    Field m0_;
    Field source_u_;
    Field source_m_;
    bool has_sources_;
    int m0_clipped_ = 0;
    std::shared_ptr<const ShiftedHelmholtz> shifted_;
};

/// The discrete pair (u, m).
struct State {
    Field u;
    Field m;
};

State zero_state(std::shared_ptr<const PeriodicMesh> mesh);
State add_scaled(const State& x, double a, const State& d); // x + a*d

/// Product-space norm used for residuals, stopping and distances:
/// H1 of the u component plus L2 of the m component.
double state_norm(const FemSpace& space, const State& s);
double state_distance(const FemSpace& space, const State& a, const State& b);

/// Coefficient stacking (u on top of m) for the block linear algebra.
Vector stack(const State& s);
State unstack(std::shared_ptr<const PeriodicMesh> mesh, const Vector& x);

/// A-priori estimates evaluated on a (converged) state: the discrete mass
/// identity, the sup bound on u, the large-lambda sup bound on m, and
/// nodal positivity of m. Violations are reported, not fatal (discrete
/// maximum principles are not guaranteed for P1 transport).
struct SolutionChecks {
    double mass_m;
    double mass_error; // |mass_m - 1|
    double u_sup;
    double u_bound; // (sup|f| + sup|source_u|)/lambda + 1e-8
    bool u_bound_ok;
    double K_hat; // max element |Du|
    double M_hat; // 2 sup|f| + K_hat^2/2
    bool m_bound_applicable; // lambda > M_hat
    double m_sup;
    double m_bound; // lambda/(lambda - M_hat) * sup|m0| + 1e-8
    bool m_bound_ok;
    double min_m;
    bool positivity_ok; // min_m > -1e-10
};

SolutionChecks validate_solution(const Problem& problem, const State& state);

} // namespace mfgs
