#pragma once

#include "hadfact/solver.hpp"

#include <utility>

namespace hadfact {

/// A rank-r matrix U S V^T with orthonormal U (m x r), V (n x r) and an
/// invertible r x r core S.
struct FixedRankPoint {
  Matrix U;
  Matrix S;
  Matrix V;

  Index rank() const { return S.rows(); }
  Matrix dense() const { return U * S * V.transpose(); }

  /// Point representing W H^T; W and H must have r <= min(m, n) columns.
  /// Singular values below 1e-12 * sigma_1 are lifted to that floor.
  static FixedRankPoint from_factors(const Matrix& w, const Matrix& h);
};

/// Euclidean gradient of Phi(X1, X2) = 1/2 ||X - X1 .* X2||_F^2:
/// (-R .* X2, -R .* X1) with R = X - X1 .* X2.
std::pair<Matrix, Matrix> grad_phi(const Matrix& x, const FixedRankPoint& x1,
                                   const FixedRankPoint& x2);

/// Hessian of Phi applied to the direction (A, B):
/// (A .* X2 .* X2 + (2 X1 .* X2 - X) .* B, (2 X1 .* X2 - X) .* A + B .* X1 .* X1).
std::pair<Matrix, Matrix> hess_phi_action(const Matrix& x, const FixedRankPoint& x1,
                                          const FixedRankPoint& x2, const Matrix& a,
                                          const Matrix& b);

/// Orthogonal projection G - (I - U U^T) G (I - V V^T) onto the tangent space
/// of the rank-r manifold at p.
Matrix fixed_rank_tangent_project(const FixedRankPoint& p, const Matrix& g);

/// Largest m * n accepted by rgd_standard, which works on dense m x n arrays.
inline constexpr double kDenseEntryLimit = 5e7;

/// Riemannian gradient descent on M_r x M_r with Armijo backtracking and a
/// truncated-SVD retraction. Needs r <= min(m, n) and m * n <= kDenseEntryLimit.
RunRecord rgd_standard(const MatrixHandle& x, Index r, const HadamardFactors& init,
                       const SolverConfig& config = {});

} // namespace hadfact
