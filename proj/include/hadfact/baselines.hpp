#pragma once

#include "hadfact/solver.hpp"

namespace hadfact {

/// Least-squares update of one factor row: with c = D1 h, solves
/// (D2^T diag(c.^2) D2) z = D2^T (c .* t). Falls back to a Tikhonov shift of
/// 1e-12 * trace when the system matrix is singular.
Vector bcd_row_solve(const Matrix& d1, const Matrix& d2, const Vector& h, const Vector& t);

/// Cyclic block coordinate descent over W1, H1, W2, H2 with exact row-wise
/// solves and the same extrapolation / restart logic as projbcd. Pass
/// ExtrapolationParams::bcd_defaults() in `config` for the recommended tuple.
/// X is densified (m * n <= 5e7).
RunRecord bcd(const MatrixHandle& x, Index r, const HadamardFactors& init,
              const SolverConfig& config);

enum class FactorId { W1, H1, W2, H2 };

/// Gradient of E = ||X - (W1 H1^T) .* (W2 H2^T)||_F^2 with respect to one factor,
/// e.g. 2 (((W1 H1^T) .* (W2 H2^T) - X) .* (W2 H2^T)) H1 for W1.
Matrix hd_gradient(const Matrix& x, const HadamardFactors& f, FactorId which);

/// One cyclic pass W1, H1, W2, H2 of (scaled) gradient descent. The scaling
/// matrix of W1 is (H1^T H1)^-1 (pseudo-inverse when singular) and analogous
/// for the other factors; `scaled = false` uses the identity.
HadamardFactors scaled_gd_step(const HadamardFactors& f, const Matrix& x, double eta,
                               bool scaled);

/// Repeats scaled_gd_step on X / ||X||. A pass that increases the error is
/// discarded and eta halved.
RunRecord scaled_gd(const MatrixHandle& x, Index r, const HadamardFactors& init,
                    const SolverConfig& config, double eta = 1e-3, bool scaled = true);

} // namespace hadfact
