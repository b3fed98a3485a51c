#pragma once

#include <Eigen/Sparse>

#include "pmdrift/drift.hpp"
#include "pmdrift/grid.hpp"

namespace pmdrift::fv {

using SpMat = Eigen::SparseMatrix<double>;

/// Negative discrete Laplacian with homogeneous Dirichlet ghost values:
/// (L p)_i = sum_axis (2 p_i - p_left - p_right) / h_a^2, missing neighbors
/// contributing zero.
SpMat laplacian_matrix(const Grid& grid);

/// Flux-form upwind drift operator: (D v)_i = div_h of the upwinded face flux
/// V_f * v_upwind, with zero exterior values at inflow boundary faces.
SpMat upwind_drift_matrix(const VectorFieldSpec& V);

Field apply(const SpMat& A, const Field& x);

/// M-matrix structure check: nonpositive off-diagonals and weak diagonal
/// dominance by columns. Returns the worst violation (<= tol means pass).
struct MMatrixCheck {
  double worst_offdiag;      // max positive off-diagonal entry
  double worst_column_sum;   // min column sum
  bool pass(double tol = 1e-12) const {
    return worst_offdiag <= tol && worst_column_sum >= -tol;
  }
};
MMatrixCheck check_m_matrix(const SpMat& A);

/// Direct factorization in 1D; diagonally preconditioned BiCGSTAB in 2D with
/// a direct fallback. Deterministic for fixed inputs.
Eigen::VectorXd solve_sparse(const SpMat& A, const Eigen::VectorXd& b, const Grid& grid,
                             double lin_tol);

}  // namespace pmdrift::fv
