#pragma once

#include "hadfact/matrix.hpp"

namespace hadfact {

/// Quantities shared by every inner update of one block of
/// Psi(W, H) = 1/2 ||X - W H^T||_F^2 with the opposite block held fixed:
/// A = H^T H, B = X H, L = ||A||_2 and the step alpha = tau / L.
struct BlockGradientWorkspace {
  Matrix A;
  Matrix B;
  double L = 0.0;
  double alpha = 0.0;
};

/// Workspace for the W-block given the fixed H (pass X^T and W for the H-block).
BlockGradientWorkspace make_block_workspace(const MatrixHandle& x, const Matrix& h, double tau);

/// (W H^T - X) H = W A - B.
Matrix grad_psi_W(const Matrix& w, const BlockGradientWorkspace& ws);

/// Action of the block Hessian: Y A.
Matrix hess_psi_action(const Matrix& y, const Matrix& a);

/// 1/2 ||X - W H^T||_F^2 without forming W H^T.
double psi(const MatrixHandle& x, const Matrix& w, const Matrix& h);

/// Spectral norm of a symmetric PSD matrix, from a dense eigensolver.
double lipschitz(const Matrix& a);

struct RescaledPair {
  Matrix W;     // Wf * diag(norms)
  Matrix H;     // Hf * diag(norms)^-1, unit columns
  Vector norms; // column norms of Hf; entries below 1e-15 replaced by 1
};

/// Moves the column norms of Hf onto Wf; W H^T equals Wf Hf^T.
RescaledPair rescale_columns(const Matrix& wf, const Matrix& hf);

} // namespace hadfact
