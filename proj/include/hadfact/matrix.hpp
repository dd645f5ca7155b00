#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <variant>
#include <vector>

namespace hadfact {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// A real matrix stored either densely (column-major) or as compressed sparse
/// rows. Sparse storage never keeps explicit zeros and its column indices are
/// strictly increasing within each row.
class MatrixHandle {
public:
  MatrixHandle() = default;
  MatrixHandle(Matrix dense);        // NOLINT(google-explicit-constructor)
  MatrixHandle(SparseMatrix sparse); // NOLINT(google-explicit-constructor)

  static MatrixHandle from_triplets(Index rows, Index cols,
                                    const std::vector<Triplet>& triplets);

  Index rows() const;
  Index cols() const;
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(storage_); }
  /// Number of stored entries (rows*cols for dense storage).
  Index stored_entries() const;
  /// Heap bytes used by the numeric storage.
  std::size_t storage_bytes() const;

  const Matrix& dense() const;
  const SparseMatrix& sparse() const;
  Matrix to_dense() const;
  SparseMatrix to_sparse() const;

  MatrixHandle transposed() const;
  double squared_norm() const;
  double norm() const;
  double coeff(Index i, Index j) const;

  /// X * B
  Matrix multiply(const Matrix& rhs) const;
  /// X^T * B
  Matrix multiply_transposed(const Matrix& rhs) const;

  /// Applies f to every stored entry. For sparse storage f(0) must be 0; any
  /// entry mapped to zero is dropped.
  template <class F>
  MatrixHandle map_values(F f) const {
    if (is_sparse()) {
      SparseMatrix out = sparse();
      for (Index k = 0; k < out.nonZeros(); ++k) {
        out.valuePtr()[k] = f(out.valuePtr()[k]);
      }
      return MatrixHandle(std::move(out));
    }
    return MatrixHandle(Matrix(dense().unaryExpr(f)));
  }

  MatrixHandle scaled(double factor) const;

private:
  std::variant<Matrix, SparseMatrix> storage_;
};

/// Row-wise Kronecker product: row i of the result is kron(a_i^T, b_i^T), so
/// column p*r2+q holds A(:,p) .* B(:,q).
Matrix face_split(const Matrix& a, const Matrix& b);

/// (A•B)^T (A•B) accumulated in row blocks so the m x r1*r2 product is never
/// materialized.
Matrix face_split_gram(const Matrix& a, const Matrix& b);

/// Entry-wise product. A sparse operand keeps its pattern in the result.
Matrix hadamard(const Matrix& a, const Matrix& b);
MatrixHandle hadamard(const MatrixHandle& a, const MatrixHandle& b);

struct SvdTriple {
  Matrix U;
  Vector S;
  Matrix V;

  Index rank() const { return S.size(); }
  Matrix reconstruct() const { return U * S.asDiagonal() * V.transpose(); }
};

/// Dominant k singular triplets with nonincreasing S. The entry of largest
/// magnitude of each left singular vector is made nonnegative.
SvdTriple tsvd(const MatrixHandle& x, Index k);
SvdTriple tsvd(const Matrix& x, Index k);

/// Full thin SVD of a dense matrix under the same sign convention.
SvdTriple full_svd(const Matrix& x);

/// ||X - W H^T||_F without forming W H^T.
double factored_error(const MatrixHandle& x, const Matrix& w, const Matrix& h);

/// Flips singular-vector pairs so the largest-magnitude entry of every column
/// of U is nonnegative.
void normalize_svd_signs(Matrix& u, Matrix& v);

} // namespace hadfact
