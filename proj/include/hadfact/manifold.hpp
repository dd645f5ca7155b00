#pragma once

#include "hadfact/matrix.hpp"

namespace hadfact {

/// A point W = W1 • W2 of the closure of the face-split set, kept in factored
/// form together with the polar split of every row: W1(i,:) = mu_i x_i^T,
/// W2(i,:) = nu_i y_i^T with unit x_i, y_i. Row i of W is vec(rho_i y_i x_i^T)
/// where rho_i = mu_i nu_i; x_i and y_i are zero when rho_i = 0.
class FaceSplitPoint {
public:
  FaceSplitPoint() = default;
  FaceSplitPoint(Matrix w1, Matrix w2);

  Index rows() const { return w1_.rows(); }
  Index rank() const { return w1_.cols(); }

  const Matrix& W1() const { return w1_; }
  const Matrix& W2() const { return w2_; }
  const Vector& mu() const { return mu_; }
  const Vector& nu() const { return nu_; }
  /// Row i holds x_i^T.
  const Matrix& x() const { return x_; }
  /// Row i holds y_i^T.
  const Matrix& y() const { return y_; }
  double rho(Index i) const { return mu_(i) * nu_(i); }

  /// face_split(W1, W2).
  Matrix assemble() const;

private:
  Matrix w1_, w2_;
  Vector mu_, nu_;
  Matrix x_, y_;
};

/// Column-major reshape of row i of `a` (length r*r) into an r x r matrix.
Matrix row_as_square(const Matrix& a, Index i, Index r);

/// Side length r of an m x r^2 matrix; throws when cols is not a perfect square.
Index square_side(Index cols);

/// Best rank-1 approximation of the r x r matrix `block`, returned as the pair
/// (a, b) with kron(a, b) = vec(sigma u v^T) and a = sqrt(sigma) v,
/// b = sqrt(sigma) u. A zero block yields zero vectors.
void rank1_split(const Matrix& block, Eigen::Ref<Vector> a, Eigen::Ref<Vector> b);

/// Orthogonal (Frobenius) projection onto the closure of the face-split set:
/// each row is replaced by its best rank-1 approximation.
FaceSplitPoint project_bmr(const Matrix& a);

/// Orthogonal projection onto the tangent space at P: row i becomes
/// vec(A_i - (I - y_i y_i^T) A_i (I - x_i x_i^T)). Requires rho_i > 0 for
/// every row.
Matrix tangent_project(const FaceSplitPoint& p, const Matrix& a);

} // namespace hadfact
