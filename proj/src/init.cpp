#include "hadfact/init.hpp"

#include "hadfact/manifold.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace hadfact {

namespace {

constexpr double kPinvTol = 1e-10;
constexpr double kTinyDenominator = 1e-300;

void require_face_split_rank(const MatrixHandle& x, Index r, const char* name) {
  if (r < 1) throw std::invalid_argument(std::string(name) + ": rank must be at least 1");
  if (!init_available(InitKind::fs, x.rows(), x.cols(), r)) {
    throw InitUnavailable(std::string(name) + " needs r^2 <= min(m, n); got r = " +
                          std::to_string(r) + " for a " + std::to_string(x.rows()) + "x" +
                          std::to_string(x.cols()) + " matrix");
  }
}

// U sqrt(S) and V sqrt(S) of the rank-r^2 truncated SVD.
void balanced_tsvd(const MatrixHandle& x, Index k, Matrix& u, Matrix& v) {
  const SvdTriple t = tsvd(x, k);
  const Vector root = t.S.cwiseSqrt();
  u = t.U * root.asDiagonal();
  v = t.V * root.asDiagonal();
}

} // namespace

std::string to_string(InitKind kind) {
  switch (kind) {
  case InitKind::svd: return "svd";
  case InitKind::fs: return "fs";
  case InitKind::fsl: return "fsl";
  case InitKind::fsr: return "fsr";
  }
  return "unknown";
}

InitKind parse_init(const std::string& name) {
  for (InitKind k : all_inits()) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown initialization '" + name + "' (svd|fs|fsl|fsr)");
}

std::vector<InitKind> all_inits() { return {InitKind::svd, InitKind::fs, InitKind::fsl, InitKind::fsr}; }

bool init_available(InitKind kind, Index m, Index n, Index r) {
  if (kind == InitKind::svd) return r >= 1 && r <= std::min(m, n);
  return r >= 1 && r * r <= std::min(m, n);
}

HadamardFactors init_svd_based(const MatrixHandle& x, Index r) {
  if (r < 1 || r > std::min(x.rows(), x.cols())) {
    throw std::invalid_argument("svd init: rank must satisfy 1 <= r <= min(m, n)");
  }
  const MatrixHandle x1 = x.map_values([](double v) { return std::sqrt(std::abs(v)); });
  const MatrixHandle x2 = x.map_values([](double v) {
    const double s = std::sqrt(std::abs(v));
    return v < 0.0 ? -s : s;
  });
  HadamardFactors f;
  const SvdTriple t1 = tsvd(x1, r);
  const SvdTriple t2 = tsvd(x2, r);
  const Vector s1 = t1.S.cwiseSqrt();
  const Vector s2 = t2.S.cwiseSqrt();
  f.W1 = t1.U * s1.asDiagonal();
  f.H1 = t1.V * s1.asDiagonal();
  f.W2 = t2.U * s2.asDiagonal();
  f.H2 = t2.V * s2.asDiagonal();
  return f;
}

HadamardFactors init_fs(const MatrixHandle& x, Index r) {
  require_face_split_rank(x, r, "fs init");
  Matrix u, v;
  balanced_tsvd(x, r * r, u, v);
  const FaceSplitPoint w = project_bmr(u);
  const FaceSplitPoint h = project_bmr(v);
  return {w.W1(), h.W1(), w.W2(), h.W2()};
}

HadamardFactors init_fsl(const MatrixHandle& x, Index r) {
  require_face_split_rank(x, r, "fsl init");
  Matrix u, v;
  balanced_tsvd(x, r * r, u, v);
  const FaceSplitPoint h = project_bmr(v);
  const Matrix hfs = h.assemble();

  // U* = X (H^+)^T = (X P) S^+ Q^T with H = P S Q^T.
  Eigen::BDCSVD<Matrix> svd(hfs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Vector sinv = Vector::Zero(s.size());
  const double cutoff = s.size() > 0 ? kPinvTol * s(0) : 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) sinv(i) = 1.0 / s(i);
  }
  const Matrix ustar = x.multiply(svd.matrixU()) * sinv.asDiagonal() * svd.matrixV().transpose();
  const FaceSplitPoint w = project_bmr(ustar);
  return {w.W1(), h.W1(), w.W2(), h.W2()};
}

HadamardFactors init_fsr(const MatrixHandle& x, Index r) {
  require_face_split_rank(x, r, "fsr init");
  return init_fsl(x.transposed(), r).transposed();
}

HadamardFactors initialize(InitKind kind, const MatrixHandle& x, Index r) {
  switch (kind) {
  case InitKind::svd: return init_svd_based(x, r);
  case InitKind::fs: return init_fs(x, r);
  case InitKind::fsl: return init_fsl(x, r);
  case InitKind::fsr: return init_fsr(x, r);
  }
  throw std::invalid_argument("unknown initialization");
}

double optimal_gamma(const MatrixHandle& x, const Matrix& w, const Matrix& h) {
  if (w.rows() != x.rows() || h.rows() != x.cols() || w.cols() != h.cols()) {
    throw std::invalid_argument("optimal_gamma: shape mismatch");
  }
  const double den = ((w.transpose() * w).cwiseProduct(h.transpose() * h)).sum();
  if (!(den > kTinyDenominator)) return 1.0;
  return x.multiply(h).cwiseProduct(w).sum() / den;
}

double optimal_gamma(const MatrixHandle& x, const HadamardFactors& f) {
  const double den = hd_squared_norm(f);
  if (!(den > kTinyDenominator)) return 1.0;
  return hd_inner(x, f) / den;
}

HadamardFactors apply_optimal_gamma(const MatrixHandle& x, const HadamardFactors& f) {
  const double gamma = optimal_gamma(x, f);
  const double s = std::pow(std::abs(gamma), 0.25);
  HadamardFactors out = f;
  out.scale_all(s);
  if (gamma < 0.0) out.H1 = -out.H1;
  return out;
}

} // namespace hadfact
