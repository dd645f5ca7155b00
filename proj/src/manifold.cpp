#include "hadfact/manifold.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>

namespace hadfact {

FaceSplitPoint::FaceSplitPoint(Matrix w1, Matrix w2) : w1_(std::move(w1)), w2_(std::move(w2)) {
  if (w1_.rows() != w2_.rows() || w1_.cols() != w2_.cols()) {
    throw std::invalid_argument("FaceSplitPoint: W1 and W2 must have equal shapes");
  }
  const Index m = w1_.rows();
  const Index r = w1_.cols();
  mu_ = w1_.rowwise().norm();
  nu_ = w2_.rowwise().norm();
  x_ = Matrix::Zero(m, r);
  y_ = Matrix::Zero(m, r);
  for (Index i = 0; i < m; ++i) {
    if (mu_(i) * nu_(i) > 0.0) {
      x_.row(i) = w1_.row(i) / mu_(i);
      y_.row(i) = w2_.row(i) / nu_(i);
    }
  }
}

Matrix FaceSplitPoint::assemble() const { return face_split(w1_, w2_); }

Index square_side(Index cols) {
  const auto r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(cols))));
  if (r < 1 || r * r != cols) {
    throw std::invalid_argument("expected r^2 columns, got " + std::to_string(cols));
  }
  return r;
}

Matrix row_as_square(const Matrix& a, Index i, Index r) {
  const Vector row = a.row(i).transpose();
  return Eigen::Map<const Matrix>(row.data(), r, r);
}

void rank1_split(const Matrix& block, Eigen::Ref<Vector> a, Eigen::Ref<Vector> b) {
  const Index r = block.rows();
  if (r == 1) {
    const double v = block(0, 0);
    const double s = std::sqrt(std::abs(v));
    b(0) = s;
    a(0) = v < 0.0 ? -s : s;
    return;
  }
  Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma = svd.singularValues()(0);
  if (!(sigma > 0.0)) {
    a.setZero();
    b.setZero();
    return;
  }
  Vector u = svd.matrixU().col(0);
  Vector v = svd.matrixV().col(0);
  Index arg = 0;
  u.cwiseAbs().maxCoeff(&arg);
  if (u(arg) < 0.0) {
    u = -u;
    v = -v;
  }
  const double s = std::sqrt(sigma);
  a = s * v;
  b = s * u;
}

FaceSplitPoint project_bmr(const Matrix& a) {
  const Index r = square_side(a.cols());
  const Index m = a.rows();
  Matrix w1(m, r), w2(m, r);
  Vector ai(r), bi(r);
  for (Index i = 0; i < m; ++i) {
    rank1_split(row_as_square(a, i, r), ai, bi);
    w1.row(i) = ai.transpose();
    w2.row(i) = bi.transpose();
  }
  return FaceSplitPoint(std::move(w1), std::move(w2));
}

Matrix tangent_project(const FaceSplitPoint& p, const Matrix& a) {
  const Index r = p.rank();
  if (a.rows() != p.rows() || a.cols() != r * r) {
    throw std::invalid_argument("tangent_project: A must be " + std::to_string(p.rows()) + "x" +
                                std::to_string(r * r));
  }
  Matrix out(a.rows(), a.cols());
  const Matrix eye = Matrix::Identity(r, r);
  for (Index i = 0; i < a.rows(); ++i) {
    if (!(p.rho(i) > 0.0)) {
      throw std::invalid_argument("tangent_project: row " + std::to_string(i) +
                                  " of the base point is zero; tangent space undefined");
    }
    const Vector x = p.x().row(i).transpose();
    const Vector y = p.y().row(i).transpose();
    const Matrix ai = row_as_square(a, i, r);
    const Matrix normal = (eye - y * y.transpose()) * ai * (eye - x * x.transpose());
    const Matrix proj = ai - normal;
    out.row(i) = Eigen::Map<const Vector>(proj.data(), r * r).transpose();
  }
  return out;
}

} // namespace hadfact
