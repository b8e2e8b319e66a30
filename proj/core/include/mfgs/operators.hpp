#pragma once

#include "mfgs/problem.hpp"

#include <Eigen/SparseLU>

namespace mfgs {

/// Load-vector pair (xi, zeta): each component already tested against all
/// basis functions.
struct DualPair {
    Vector xi;
    Vector zeta;
};

/// G(u,m) as load vectors:
///   xi_i   = int ( (1/2)|Du|^2 - f(m) - source_u ) phi_i
///   zeta_i = int m Du . Dphi_i - int ( lambda m0 + source_m ) phi_i
/// The divergence term is assembled in weak form, +int m Du . Dphi.
DualPair apply_G(const Problem& problem, const State& state);

/// F(u,m) = (u,m) + T_h(G(u,m)). Zero iff the state solves the discrete system.
State residual_F(const Problem& problem, const State& state);

/// The four load-space blocks of dG[u,m] acting on coefficient pairs (v, rho):
///   a11 v   = int (Du . Dv) phi_i          a12 rho = -int f'(m) rho phi_i
///   a21 v   = int m Dv . Dphi_i            a22 rho = int rho Du . Dphi_i
/// f'(m) is interpolated to P1 before exact quadrature.
struct DGBlocks {
    SparseMat a11, a12, a21, a22;
};

DGBlocks assemble_dG(const Problem& problem, const State& state);

/// dG applied to a stacked coefficient vector, as stacked load vectors.
Vector apply_blocks(const DGBlocks& blocks, const Vector& x);

/// The linearization dF[u,m] = I + T_h dG[u,m], realized matrix-free as
/// x + A^{-1}(dG x) with A = K + lambda M applied per component (A stays in
/// factored form; no sparse-times-inverse product is built). The sparse
/// 2x2-block matrix J = blkdiag(A, A) + dG is kept for direct solves:
/// dF x = b is equivalent to J x = blkdiag(A, A) b.
class LinearizedSystem {
public:
    LinearizedSystem(const Problem& problem, DGBlocks blocks);

    int size() const { return 2 * space_->size(); }
    const DGBlocks& blocks() const { return blocks_; }
    const SparseMat& newton_matrix() const { return newton_matrix_; }

    Vector apply(const Vector& x) const;           // dF x
    Vector apply_transpose(const Vector& x) const; // dF^T x
    Vector solve(const Vector& b) const;           // dF x = b
    Vector solve_transpose(const Vector& b) const; // dF^T x = b

    /// blkdiag(A, A) x -- the load-space image of a coefficient pair.
    Vector apply_shift(const Vector& x) const;
    Vector solve_shift(const Vector& x) const; // blkdiag(A, A)^{-1} x

    /// Solve J x = b directly (the Newton step works in load space).
    Vector solve_newton(const Vector& b) const;

private:
    std::shared_ptr<const FemSpace> space_;
    std::shared_ptr<const ShiftedHelmholtz> shifted_;
    DGBlocks blocks_;
    SparseMat newton_matrix_;
    // mutable: Eigen's SparseLU::transpose() view is non-const although
    // solving leaves the factorization untouched
    mutable Eigen::SparseLU<SparseMat> lu_;
};

LinearizedSystem assemble_dF(const Problem& problem, const State& state);

} // namespace mfgs
