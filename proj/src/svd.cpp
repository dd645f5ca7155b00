// Truncated SVD: dense bidiagonalization for moderate sizes, thick-restart
// Golub-Kahan-Lanczos with full reorthogonalization otherwise.

#include "hadfact/matrix.hpp"
#include "hadfact/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hadfact {

namespace {

constexpr Index kDenseLimit = 2000;
constexpr double kResidualTol = 1e-10;
constexpr int kMaxRestarts = 3000;

SvdTriple truncate(SvdTriple full, Index k) {
  SvdTriple out{full.U.leftCols(k), full.S.head(k), full.V.leftCols(k)};
  normalize_svd_signs(out.U, out.V);
  return out;
}

// Two passes of classical Gram-Schmidt against the first `count` columns of
// `basis`; returns the accumulated coefficients.
Vector orthogonalize(const Matrix& basis, Index count, Vector& w) {
  if (count == 0) return Vector();
  Vector coeffs = basis.leftCols(count).transpose() * w;
  w.noalias() -= basis.leftCols(count) * coeffs;
  const Vector again = basis.leftCols(count).transpose() * w;
  w.noalias() -= basis.leftCols(count) * again;
  return coeffs + again;
}

// Replaces a vanished Lanczos vector by a random direction orthogonal to the
// current basis; Krylov breakdown only means an invariant subspace was found.
Vector fresh_direction(const Matrix& basis, Index count, Rng& rng) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vector w(basis.rows());
    for (Index i = 0; i < w.size(); ++i) w(i) = rng.normal();
    orthogonalize(basis, count, w);
    const double nrm = w.norm();
    if (nrm > 1e-8) return w / nrm;
  }
  return Vector::Zero(basis.rows());
}

class Operator {
public:
  explicit Operator(const MatrixHandle& x) : x_(x) {}
  Vector apply(const Vector& v) const {
    if (x_.is_sparse()) return x_.sparse() * v;
    return x_.dense() * v;
  }
  Vector apply_transposed(const Vector& u) const {
    if (x_.is_sparse()) return x_.sparse().transpose() * u;
    return x_.dense().transpose() * u;
  }

private:
  const MatrixHandle& x_;
};

SvdTriple lanczos_tsvd(const MatrixHandle& x, Index k) {
  const Index m = x.rows();
  const Index n = x.cols();
  const Index limit = std::min(m, n);
  const Index work = std::min(limit, std::max<Index>(2 * k + 16, k + 32));
  const Index keep = std::min(work - 1, k + (work - k) / 2);
  const Operator op(x);
  const double scale = std::max(x.norm(), std::numeric_limits<double>::min());

  Rng rng(0x5eedULL);
  Matrix U = Matrix::Zero(m, work);
  Matrix V = Matrix::Zero(n, work);
  Matrix B = Matrix::Zero(work, work);
  {
    Vector v0(n);
    for (Index i = 0; i < n; ++i) v0(i) = rng.normal();
    V.col(0) = v0.normalized();
  }

  Index start = 0;
  for (int restart = 0; restart <= kMaxRestarts; ++restart) {
    Vector residual;
    double beta_last = 0.0;
    for (Index j = start; j < work; ++j) {
      Vector w = op.apply(V.col(j));
      const Vector c = orthogonalize(U, j, w);
      if (j > 0) B.col(j).head(j) = c;
      double alpha = w.norm();
      if (alpha <= 1e-14 * scale) {
        alpha = 0.0;
        U.col(j) = fresh_direction(U, j, rng);
      } else {
        U.col(j) = w / alpha;
      }
      B(j, j) = alpha;

      Vector f = op.apply_transposed(U.col(j));
      orthogonalize(V, j + 1, f);
      const double beta = f.norm();
      if (j + 1 < work) {
        if (beta <= 1e-14 * scale) {
          V.col(j + 1) = fresh_direction(V, j + 1, rng);
          B(j, j + 1) = 0.0;
        } else {
          V.col(j + 1) = f / beta;
          B(j, j + 1) = beta;
        }
      } else {
        residual = std::move(f);
        beta_last = beta;
      }
    }

    Eigen::JacobiSVD<Matrix> small(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& sigma = small.singularValues();
    const Matrix& P = small.matrixU();
    const Matrix& Q = small.matrixV();

    bool converged = true;
    const double tol = kResidualTol * std::max(sigma(0), 1e-300);
    for (Index i = 0; i < k; ++i) {
      if (beta_last * std::abs(P(work - 1, i)) > tol) {
        converged = false;
        break;
      }
    }
    if (converged || beta_last <= 1e-14 * scale || restart == kMaxRestarts) {
      SvdTriple out{U * P.leftCols(k), sigma.head(k), V * Q.leftCols(k)};
      normalize_svd_signs(out.U, out.V);
      return out;
    }

    // Thick restart: keep the leading Ritz vectors, continue from the residual.
    const Matrix Uk = U * P.leftCols(keep);
    const Matrix Vk = V * Q.leftCols(keep);
    U.leftCols(keep) = Uk;
    V.leftCols(keep) = Vk;
    B.setZero();
    for (Index i = 0; i < keep; ++i) {
      B(i, i) = sigma(i);
      B(i, keep) = beta_last * P(work - 1, i);
    }
    V.col(keep) = residual / beta_last;
    start = keep;
  }
  throw std::logic_error("lanczos_tsvd: unreachable");
}

void check_rank(Index k, Index m, Index n) {
  if (k < 1 || k > std::min(m, n)) {
    throw std::invalid_argument("tsvd: rank " + std::to_string(k) + " outside [1, " +
                                std::to_string(std::min(m, n)) + "]");
  }
}

} // namespace

void normalize_svd_signs(Matrix& u, Matrix& v) {
  for (Index i = 0; i < u.cols(); ++i) {
    Index arg = 0;
    u.col(i).cwiseAbs().maxCoeff(&arg);
    if (u(arg, i) < 0.0) {
      u.col(i) = -u.col(i);
      if (i < v.cols()) v.col(i) = -v.col(i);
    }
  }
}

SvdTriple full_svd(const Matrix& x) {
  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdTriple out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  normalize_svd_signs(out.U, out.V);
  return out;
}

SvdTriple tsvd(const Matrix& x, Index k) {
  check_rank(k, x.rows(), x.cols());
  if (std::min(x.rows(), x.cols()) <= kDenseLimit) return truncate(full_svd(x), k);
  return lanczos_tsvd(MatrixHandle(x), k);
}

SvdTriple tsvd(const MatrixHandle& x, Index k) {
  check_rank(k, x.rows(), x.cols());
  const Index limit = std::min(x.rows(), x.cols());
  if (!x.is_sparse()) {
    if (limit <= kDenseLimit) return truncate(full_svd(x.dense()), k);
    return lanczos_tsvd(x, k);
  }
  // A Krylov basis wider than half the spectrum buys nothing over a dense
  // factorization, provided the densified matrix is of reasonable size.
  const bool small = static_cast<double>(x.rows()) * static_cast<double>(x.cols()) <= 4e6;
  if (2 * std::max<Index>(2 * k + 16, k + 32) >= limit && small) {
    return truncate(full_svd(x.to_dense()), k);
  }
  return lanczos_tsvd(x, k);
}

} // namespace hadfact
