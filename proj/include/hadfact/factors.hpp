#pragma once

#include "hadfact/matrix.hpp"

namespace hadfact {

/// Factor quadruple of a rank-r Hadamard decomposition
/// X ~ (W1 H1^T) .* (W2 H2^T).
struct HadamardFactors {
  Matrix W1; // m x r
  Matrix H1; // n x r
  Matrix W2; // m x r
  Matrix H2; // n x r

  Index rank() const { return W1.cols(); }
  Index rows() const { return W1.rows(); }
  Index cols() const { return H1.rows(); }

  /// Throws std::invalid_argument unless the four shapes are consistent.
  void validate(Index m, Index n, Index r) const;
  bool all_finite() const;

  /// (W1 H1^T) .* (W2 H2^T) as a dense matrix.
  Matrix reconstruct() const;
  /// Multiplies every factor by `factor`; the product scales by factor^4.
  void scale_all(double factor);
  /// Exchanges the roles of rows and columns (decomposition of X^T).
  HadamardFactors transposed() const;

  static HadamardFactors zeros(Index m, Index n, Index r);
};

/// <X, (W1 H1^T) .* (W2 H2^T)> in O(nnz * r) for sparse X, O(m n r) for dense.
double hd_inner(const MatrixHandle& x, const HadamardFactors& f);

/// ||(W1 H1^T) .* (W2 H2^T)||_F^2 through the r^2 x r^2 Gram matrices.
double hd_squared_norm(const HadamardFactors& f);

/// ||X - (W1 H1^T) .* (W2 H2^T)||_F, never materializing the m x n product.
double hd_error(const MatrixHandle& x, const HadamardFactors& f);

/// hd_error divided by ||X||_F (0 when X = 0 and the product is 0).
double hd_relative_error(const MatrixHandle& x, const HadamardFactors& f);

} // namespace hadfact
