#pragma once

#include "hadfact/manifold.hpp"
#include "hadfact/solver.hpp"

namespace hadfact {

/// Two-block projected gradient descent on the W H^T representation:
/// rescaling, k_W / k_H inner steps followed by projection onto the closure
/// of the face-split set, adaptive extrapolation with restart on increase.
RunRecord projbcd(const MatrixHandle& x, Index r, const HadamardFactors& init,
                  const SolverConfig& config = {});

/// Same driver as projbcd with the projection replaced by one explicit step
/// of the row-wise gradient flow (manbcd_euler_step) per inner iteration.
RunRecord manbcd(const MatrixHandle& x, Index r, const HadamardFactors& init,
                 const SolverConfig& config = {});

/// One explicit step of the flow for a single row. `a` holds mu x^T (a row of
/// W1), `b` holds nu y^T (a row of W2) and `g` the matching gradient row of
/// length r^2. Rows with mu*nu = 0 are left untouched.
void euler_row_step(Eigen::Ref<Vector> a, Eigen::Ref<Vector> b, const double* g, double h,
                    FlowDiagnostics& diag);

/// Row-wise Euler step of the flow on the face-split set with step h > 0.
FaceSplitPoint manbcd_euler_step(const FaceSplitPoint& p, const Matrix& g, double h,
                                 FlowDiagnostics* diag = nullptr);

} // namespace hadfact
