#include "hadfact/standard.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace hadfact {

namespace {

constexpr double kSingularFloor = 1e-12;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 30;
constexpr double kGradientFloor = 1e-10;

// Lifts singular values below kSingularFloor * sigma_1 so the core stays invertible.
void floor_singular_values(Vector& s) {
  const double floor = kSingularFloor * (s.size() > 0 ? std::max(s(0), 1e-300) : 0.0);
  for (Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i), floor);
}

FixedRankPoint from_svd(Matrix u, Vector s, Matrix v) {
  floor_singular_values(s);
  FixedRankPoint p;
  p.U = std::move(u);
  p.S = s.asDiagonal();
  p.V = std::move(v);
  return p;
}

// Tangent vector at p in factored form: U M V^T + Up V^T + U Vp^T.
struct Tangent {
  Matrix M, Up, Vp;
  double squared_norm() const {
    return M.squaredNorm() + Up.squaredNorm() + Vp.squaredNorm();
  }
};

Tangent tangent_of(const FixedRankPoint& p, const Matrix& g) {
  Tangent t;
  const Matrix gv = g * p.V;
  const Matrix gtu = g.transpose() * p.U;
  t.M = p.U.transpose() * gv;
  t.Up = gv - p.U * t.M;
  t.Vp = gtu - p.V * t.M.transpose();
  return t;
}

// Rank-r truncation of p - step * xi, exploiting its rank-2r structure.
FixedRankPoint retract(const FixedRankPoint& p, const Tangent& xi, double step) {
  const Index r = p.rank();
  const Index m = p.U.rows();
  const Index n = p.V.rows();
  if (2 * r > std::min(m, n)) {
    const Matrix y = p.dense() - step * (p.U * xi.M * p.V.transpose() + xi.Up * p.V.transpose() +
                                         p.U * xi.Vp.transpose());
    SvdTriple t = tsvd(y, r);
    return from_svd(std::move(t.U), std::move(t.S), std::move(t.V));
  }
  Eigen::HouseholderQR<Matrix> qru(xi.Up);
  Eigen::HouseholderQR<Matrix> qrv(xi.Vp);
  const Matrix qu = qru.householderQ() * Matrix::Identity(m, r);
  const Matrix qv = qrv.householderQ() * Matrix::Identity(n, r);
  const Matrix ru = qru.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Matrix rv = qrv.matrixQR().topRows(r).triangularView<Eigen::Upper>();

  Matrix core = Matrix::Zero(2 * r, 2 * r);
  core.topLeftCorner(r, r) = p.S - step * xi.M;
  core.topRightCorner(r, r) = -step * rv.transpose();
  core.bottomLeftCorner(r, r) = -step * ru;
  Eigen::JacobiSVD<Matrix> svd(core, Eigen::ComputeFullU | Eigen::ComputeFullV);

  Matrix ubig(m, 2 * r), vbig(n, 2 * r);
  ubig << p.U, qu;
  vbig << p.V, qv;
  Matrix u = ubig * svd.matrixU().leftCols(r);
  Matrix v = vbig * svd.matrixV().leftCols(r);
  Vector s = svd.singularValues().head(r);
  normalize_svd_signs(u, v);
  return from_svd(std::move(u), std::move(s), std::move(v));
}

double phi(const Matrix& x, const Matrix& x1, const Matrix& x2) {
  return 0.5 * (x - x1.cwiseProduct(x2)).squaredNorm();
}

// Equalizes ||S1||_F and ||S2||_F; the product X1 .* X2 is unchanged.
void rebalance(FixedRankPoint& p1, FixedRankPoint& p2) {
  const double a = p1.S.norm();
  const double b = p2.S.norm();
  if (!(a > 0.0 && b > 0.0)) return;
  const double c = std::sqrt(b / a);
  p1.S *= c;
  p2.S /= c;
}

} // namespace

FixedRankPoint FixedRankPoint::from_factors(const Matrix& w, const Matrix& h) {
  const Index r = w.cols();
  if (h.cols() != r) throw std::invalid_argument("FixedRankPoint: W and H column counts differ");
  if (r < 1 || r > w.rows() || r > h.rows()) {
    throw std::invalid_argument("FixedRankPoint: need 1 <= r <= min(m, n)");
  }
  Eigen::HouseholderQR<Matrix> qrw(w);
  Eigen::HouseholderQR<Matrix> qrh(h);
  const Matrix qw = qrw.householderQ() * Matrix::Identity(w.rows(), r);
  const Matrix qh = qrh.householderQ() * Matrix::Identity(h.rows(), r);
  const Matrix rw = qrw.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Matrix rh = qrh.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(rw * rh.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = qw * svd.matrixU();
  Matrix v = qh * svd.matrixV();
  normalize_svd_signs(u, v);
  return from_svd(std::move(u), svd.singularValues(), std::move(v));
}

std::pair<Matrix, Matrix> grad_phi(const Matrix& x, const FixedRankPoint& x1,
                                   const FixedRankPoint& x2) {
  const Matrix d1 = x1.dense();
  const Matrix d2 = x2.dense();
  if (d1.rows() != x.rows() || d1.cols() != x.cols() || d2.rows() != x.rows() ||
      d2.cols() != x.cols()) {
    throw std::invalid_argument("grad_phi: shape mismatch");
  }
  const Matrix res = x - d1.cwiseProduct(d2);
  return {-res.cwiseProduct(d2), -res.cwiseProduct(d1)};
}

std::pair<Matrix, Matrix> hess_phi_action(const Matrix& x, const FixedRankPoint& x1,
                                          const FixedRankPoint& x2, const Matrix& a,
                                          const Matrix& b) {
  const Matrix d1 = x1.dense();
  const Matrix d2 = x2.dense();
  if (a.rows() != x.rows() || a.cols() != x.cols() || b.rows() != x.rows() ||
      b.cols() != x.cols() || d1.rows() != x.rows() || d1.cols() != x.cols()) {
    throw std::invalid_argument("hess_phi_action: shape mismatch");
  }
  const Matrix mixed = 2.0 * d1.cwiseProduct(d2) - x;
  return {a.cwiseProduct(d2).cwiseProduct(d2) + mixed.cwiseProduct(b),
          mixed.cwiseProduct(a) + b.cwiseProduct(d1).cwiseProduct(d1)};
}

Matrix fixed_rank_tangent_project(const FixedRankPoint& p, const Matrix& g) {
  const Tangent t = tangent_of(p, g);
  return p.U * t.M * p.V.transpose() + t.Up * p.V.transpose() + p.U * t.Vp.transpose();
}

RunRecord rgd_standard(const MatrixHandle& x, Index r, const HadamardFactors& init,
                       const SolverConfig& config) {
  config.validate();
  const Index m = x.rows();
  const Index n = x.cols();
  if (r < 1 || r > std::min(m, n)) {
    throw std::invalid_argument("rgd: rank must satisfy 1 <= r <= min(m, n)");
  }
  if (static_cast<double>(m) * static_cast<double>(n) > kDenseEntryLimit) {
    throw std::invalid_argument("rgd: X has " + std::to_string(m) + "x" + std::to_string(n) +
                                " entries, above the dense limit; use projbcd or manbcd");
  }
  init.validate(m, n, r);

  RunRecord rec;
  rec.algorithm = "rgd";
  const double nx = x.norm();
  if (!std::isfinite(nx)) throw NumericalError("rgd: X has non-finite entries");
  if (nx == 0.0) {
    rec.factors = HadamardFactors::zeros(m, n, r);
    rec.stop = StopReason::zero_data;
    return rec;
  }
  if (!init.all_finite()) throw NumericalError("rgd: initial factors are not finite");
  const Matrix xn = x.to_dense() / nx;
  const double q = std::pow(nx, -0.25);

  FixedRankPoint p1 = FixedRankPoint::from_factors(q * init.W1, q * init.H1);
  FixedRankPoint p2 = FixedRankPoint::from_factors(q * init.W2, q * init.H2);
  rebalance(p1, p2);
  Matrix d1 = p1.dense();
  Matrix d2 = p2.dense();
  double f = phi(xn, d1, d2);

  ProgressTracker tracker(config, std::sqrt(2.0 * f));
  double trial = 1.0;
  bool running = config.max_iters > 0 && std::sqrt(2.0 * f) > config.tol;
  while (running) {
    const Matrix res = xn - d1.cwiseProduct(d2);
    const Tangent xi1 = tangent_of(p1, -res.cwiseProduct(d2));
    const Tangent xi2 = tangent_of(p2, -res.cwiseProduct(d1));
    const double gnorm2 = xi1.squared_norm() + xi2.squared_norm();
    if (!std::isfinite(gnorm2)) throw NumericalError("rgd: non-finite Riemannian gradient");
    if (gnorm2 < kGradientFloor * kGradientFloor) {
      tracker.stop(StopReason::stagnation);
      break;
    }

    double step = trial;
    bool accepted = false;
    FixedRankPoint c1, c2;
    Matrix e1, e2;
    double fc = f;
    for (int k = 0; k <= kMaxHalvings; ++k) {
      c1 = retract(p1, xi1, step);
      c2 = retract(p2, xi2, step);
      e1 = c1.dense();
      e2 = c2.dense();
      fc = phi(xn, e1, e2);
      // fc < f as well: near convergence the Armijo margin drops below one ulp of f
      if (fc <= f - kArmijo * step * gnorm2 && fc < f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!std::isfinite(fc)) throw NumericalError("rgd: non-finite objective");
    if (accepted) {
      p1 = std::move(c1);
      p2 = std::move(c2);
      rebalance(p1, p2);
      d1 = p1.dense();
      d2 = p2.dense();
      f = fc;
      trial = 2.0 * step;
    }
    running = tracker.record(std::sqrt(2.0 * (accepted ? f : fc)), accepted, 0.0);
    if (running && !accepted) {
      tracker.stop(StopReason::stagnation);
      running = false;
    }
  }

  const double back = std::pow(nx, 0.25);
  rec.factors.W1 = back * p1.U * p1.S;
  rec.factors.H1 = back * p1.V;
  rec.factors.W2 = back * p2.U * p2.S;
  rec.factors.H2 = back * p2.V;
  tracker.finish(rec);
  return rec;
}

} // namespace hadfact
