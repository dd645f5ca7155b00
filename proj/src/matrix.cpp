#include "hadfact/matrix.hpp"
#include "hadfact/factors.hpp"
#include "hadfact/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hadfact {

namespace {

SparseMatrix clean_sparse(SparseMatrix s) {
  s.prune(0.0, 0.0);
  s.makeCompressed();
  return s;
}

void require_same_shape(Index r1, Index c1, Index r2, Index c2, const char* what) {
  if (r1 != r2 || c1 != c2) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch (" + std::to_string(r1) +
                                "x" + std::to_string(c1) + " vs " + std::to_string(r2) + "x" +
                                std::to_string(c2) + ")");
  }
}

constexpr Index kGramBlockRows = 256;

} // namespace

MatrixHandle::MatrixHandle(Matrix dense) : storage_(std::move(dense)) {}

MatrixHandle::MatrixHandle(SparseMatrix sparse) : storage_(clean_sparse(std::move(sparse))) {}

MatrixHandle MatrixHandle::from_triplets(Index rows, Index cols,
                                         const std::vector<Triplet>& triplets) {
  SparseMatrix s(rows, cols);
  s.setFromTriplets(triplets.begin(), triplets.end());
  return MatrixHandle(std::move(s));
}

Index MatrixHandle::rows() const {
  return std::visit([](const auto& m) { return static_cast<Index>(m.rows()); }, storage_);
}

Index MatrixHandle::cols() const {
  return std::visit([](const auto& m) { return static_cast<Index>(m.cols()); }, storage_);
}

Index MatrixHandle::stored_entries() const {
  return is_sparse() ? sparse().nonZeros() : dense().size();
}

std::size_t MatrixHandle::storage_bytes() const {
  if (is_sparse()) {
    const auto& s = sparse();
    return static_cast<std::size_t>(s.nonZeros()) * (sizeof(double) + sizeof(int)) +
           static_cast<std::size_t>(s.outerSize() + 1) * sizeof(int);
  }
  return static_cast<std::size_t>(dense().size()) * sizeof(double);
}

const Matrix& MatrixHandle::dense() const {
  if (const auto* d = std::get_if<Matrix>(&storage_)) return *d;
  throw std::logic_error("MatrixHandle: dense() called on sparse storage");
}

const SparseMatrix& MatrixHandle::sparse() const {
  if (const auto* s = std::get_if<SparseMatrix>(&storage_)) return *s;
  throw std::logic_error("MatrixHandle: sparse() called on dense storage");
}

Matrix MatrixHandle::to_dense() const {
  if (is_sparse()) return Matrix(sparse());
  return dense();
}

SparseMatrix MatrixHandle::to_sparse() const {
  if (is_sparse()) return sparse();
  return clean_sparse(dense().sparseView(0.0, 0.0));
}

MatrixHandle MatrixHandle::transposed() const {
  if (is_sparse()) return MatrixHandle(SparseMatrix(sparse().transpose()));
  return MatrixHandle(Matrix(dense().transpose()));
}

double MatrixHandle::squared_norm() const {
  return std::visit([](const auto& m) { return m.squaredNorm(); }, storage_);
}

double MatrixHandle::norm() const { return std::sqrt(squared_norm()); }

double MatrixHandle::coeff(Index i, Index j) const {
  if (is_sparse()) return sparse().coeff(i, j);
  return dense()(i, j);
}

Matrix MatrixHandle::multiply(const Matrix& rhs) const {
  if (rhs.rows() != cols()) throw std::invalid_argument("multiply: inner dimension mismatch");
  return std::visit([&](const auto& m) -> Matrix { return m * rhs; }, storage_);
}

Matrix MatrixHandle::multiply_transposed(const Matrix& rhs) const {
  if (rhs.rows() != rows()) throw std::invalid_argument("multiply_transposed: inner dimension mismatch");
  return std::visit([&](const auto& m) -> Matrix { return m.transpose() * rhs; }, storage_);
}

MatrixHandle MatrixHandle::scaled(double factor) const {
  if (is_sparse()) return MatrixHandle(SparseMatrix(sparse() * factor));
  return MatrixHandle(Matrix(dense() * factor));
}

Matrix face_split(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("face_split: row counts differ (" + std::to_string(a.rows()) +
                                " vs " + std::to_string(b.rows()) + ")");
  }
  const Index r1 = a.cols();
  const Index r2 = b.cols();
  Matrix out(a.rows(), r1 * r2);
  for (Index p = 0; p < r1; ++p) {
    for (Index q = 0; q < r2; ++q) {
      out.col(p * r2 + q) = a.col(p).cwiseProduct(b.col(q));
    }
  }
  return out;
}

Matrix face_split_gram(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("face_split_gram: row counts differ");
  const Index k = a.cols() * b.cols();
  Matrix gram = Matrix::Zero(k, k);
  for (Index start = 0; start < a.rows(); start += kGramBlockRows) {
    const Index len = std::min(kGramBlockRows, a.rows() - start);
    const Matrix block = face_split(a.middleRows(start, len), b.middleRows(start, len));
    gram.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
  }
  return gram.selfadjointView<Eigen::Lower>();
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "hadamard");
  return a.cwiseProduct(b);
}

MatrixHandle hadamard(const MatrixHandle& a, const MatrixHandle& b) {
  require_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "hadamard");
  if (!a.is_sparse() && !b.is_sparse()) return MatrixHandle(Matrix(a.dense().cwiseProduct(b.dense())));
  if (a.is_sparse() && b.is_sparse()) {
    return MatrixHandle(SparseMatrix(a.sparse().cwiseProduct(b.sparse())));
  }
  const SparseMatrix& s = a.is_sparse() ? a.sparse() : b.sparse();
  const Matrix& d = a.is_sparse() ? b.dense() : a.dense();
  SparseMatrix out = s;
  for (Index i = 0; i < out.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(out, i); it; ++it) it.valueRef() *= d(it.row(), it.col());
  }
  return MatrixHandle(std::move(out));
}

double factored_error(const MatrixHandle& x, const Matrix& w, const Matrix& h) {
  if (w.rows() != x.rows() || h.rows() != x.cols() || w.cols() != h.cols()) {
    throw std::invalid_argument("factored_error: dimension mismatch");
  }
  const double cross = x.multiply_transposed(w).cwiseProduct(h).sum();
  const double gram = (w.transpose() * w).cwiseProduct(h.transpose() * h).sum();
  return std::sqrt(std::max(0.0, x.squared_norm() - 2.0 * cross + gram));
}

// ---------------------------------------------------------------------------
// HadamardFactors

void HadamardFactors::validate(Index m, Index n, Index r) const {
  const bool ok = W1.rows() == m && W2.rows() == m && H1.rows() == n && H2.rows() == n &&
                  W1.cols() == r && W2.cols() == r && H1.cols() == r && H2.cols() == r;
  if (!ok) {
    throw std::invalid_argument("HadamardFactors: expected W1,W2 " + std::to_string(m) + "x" +
                                std::to_string(r) + " and H1,H2 " + std::to_string(n) + "x" +
                                std::to_string(r));
  }
}

bool HadamardFactors::all_finite() const {
  return W1.allFinite() && H1.allFinite() && W2.allFinite() && H2.allFinite();
}

Matrix HadamardFactors::reconstruct() const {
  return (W1 * H1.transpose()).cwiseProduct(W2 * H2.transpose());
}

void HadamardFactors::scale_all(double factor) {
  W1 *= factor;
  H1 *= factor;
  W2 *= factor;
  H2 *= factor;
}

HadamardFactors HadamardFactors::transposed() const { return {H1, W1, H2, W2}; }

HadamardFactors HadamardFactors::zeros(Index m, Index n, Index r) {
  return {Matrix::Zero(m, r), Matrix::Zero(n, r), Matrix::Zero(m, r), Matrix::Zero(n, r)};
}

double hd_inner(const MatrixHandle& x, const HadamardFactors& f) {
  f.validate(x.rows(), x.cols(), f.rank());
  if (x.is_sparse()) {
    const SparseMatrix& s = x.sparse();
    double total = 0.0;
    for (Index i = 0; i < s.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(s, i); it; ++it) {
        const Index j = it.col();
        total += it.value() * f.W1.row(i).dot(f.H1.row(j)) * f.W2.row(i).dot(f.H2.row(j));
      }
    }
    return total;
  }
  const Matrix& d = x.dense();
  double total = 0.0;
  for (Index start = 0; start < d.rows(); start += kGramBlockRows) {
    const Index len = std::min(kGramBlockRows, d.rows() - start);
    const Matrix c1 = f.W1.middleRows(start, len) * f.H1.transpose();
    const Matrix c2 = f.W2.middleRows(start, len) * f.H2.transpose();
    total += (d.middleRows(start, len).array() * c1.array() * c2.array()).sum();
  }
  return total;
}

double hd_squared_norm(const HadamardFactors& f) {
  return face_split_gram(f.W1, f.W2).cwiseProduct(face_split_gram(f.H1, f.H2)).sum();
}

double hd_error(const MatrixHandle& x, const HadamardFactors& f) {
  const double sq = x.squared_norm() - 2.0 * hd_inner(x, f) + hd_squared_norm(f);
  return std::sqrt(std::max(0.0, sq));
}

double hd_relative_error(const MatrixHandle& x, const HadamardFactors& f) {
  const double nx = x.norm();
  const double err = hd_error(x, f);
  if (nx == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return err / nx;
}

// ---------------------------------------------------------------------------
// Rng

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % bound;
}

Matrix Rng::uniform_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  // Filled row by row so that the layout matches a row-major reading order.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform();
  return m;
}

Matrix Rng::normal_matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal();
  return m;
}

} // namespace hadfact
