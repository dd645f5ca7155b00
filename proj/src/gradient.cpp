#include "hadfact/gradient.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace hadfact {

namespace {
constexpr double kTinyNorm = 1e-15;
} // namespace

BlockGradientWorkspace make_block_workspace(const MatrixHandle& x, const Matrix& h, double tau) {
  if (h.rows() != x.cols()) throw std::invalid_argument("make_block_workspace: H rows != X cols");
  BlockGradientWorkspace ws;
  ws.A = h.transpose() * h;
  ws.B = x.multiply(h);
  ws.L = lipschitz(ws.A);
  ws.alpha = ws.L > 0.0 ? tau / ws.L : 0.0;
  return ws;
}

Matrix grad_psi_W(const Matrix& w, const BlockGradientWorkspace& ws) {
  if (w.cols() != ws.A.rows() || w.rows() != ws.B.rows()) {
    throw std::invalid_argument("grad_psi_W: W does not match the workspace");
  }
  return w * ws.A - ws.B;
}

Matrix hess_psi_action(const Matrix& y, const Matrix& a) {
  if (y.cols() != a.rows()) throw std::invalid_argument("hess_psi_action: shape mismatch");
  return y * a;
}

double psi(const MatrixHandle& x, const Matrix& w, const Matrix& h) {
  const double e = factored_error(x, w, h);
  return 0.5 * e * e;
}

// Exact eigensolver: power iteration only bounds the top eigenvalue from
// below, and an underestimate makes tau / L an unsafe step. Its O(k^3) cost
// for k = r^2 stays below that of one block update whenever m, n >= r^2.
double lipschitz(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().cwiseAbs().maxCoeff());
}

RescaledPair rescale_columns(const Matrix& wf, const Matrix& hf) {
  if (wf.cols() != hf.cols()) throw std::invalid_argument("rescale_columns: column counts differ");
  RescaledPair out;
  out.norms = hf.colwise().norm().transpose();
  for (Index j = 0; j < out.norms.size(); ++j) {
    if (out.norms(j) < kTinyNorm) out.norms(j) = 1.0;
  }
  out.W = wf * out.norms.asDiagonal();
  out.H = hf * out.norms.cwiseInverse().asDiagonal();
  return out;
}

} // namespace hadfact
