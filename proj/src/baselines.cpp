#include "hadfact/baselines.hpp"

#include "hadfact/standard.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <string>

namespace hadfact {

namespace {

constexpr double kTikhonov = 1e-12;

// Solves M z = rhs for symmetric PSD M, shifting by 1e-12 * trace if needed.
Vector spd_solve(Matrix m, const Vector& rhs) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() == Eigen::Success) {
    Vector z = llt.solve(rhs);
    if (z.allFinite()) return z;
  }
  const double tr = m.trace();
  if (!(tr > 0.0)) return Vector::Zero(rhs.size());
  m.diagonal().array() += kTikhonov * tr;
  llt.compute(m);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  return m.completeOrthogonalDecomposition().solve(rhs);
}

// Row-wise exact update of one factor. Column k of `c` is D1 h_k and column k
// of `targets` the data the k-th row has to fit.
void solve_rows(const Matrix& c, const Matrix& d2, const Matrix& targets, Matrix& out) {
  Matrix dc(d2.rows(), d2.cols());
  for (Index k = 0; k < out.rows(); ++k) {
    dc = c.col(k).asDiagonal() * d2;
    Matrix m(d2.cols(), d2.cols());
    m.setZero();
    m.selfadjointView<Eigen::Lower>().rankUpdate(dc.transpose());
    m = m.selfadjointView<Eigen::Lower>();
    const Vector rhs = dc.transpose() * targets.col(k);
    out.row(k) = spd_solve(std::move(m), rhs).transpose();
  }
}

void extrapolate(Matrix& y, const Matrix& n, const Matrix& c, double beta) {
  if (beta == 0.0) {
    y = n;
  } else {
    y = n + beta * (n - c);
  }
}

void check_dense_limit(Index m, Index n, const char* name) {
  if (static_cast<double>(m) * static_cast<double>(n) > kDenseEntryLimit) {
    throw std::invalid_argument(std::string(name) + ": X is too large to densify (" +
                                std::to_string(m) + "x" + std::to_string(n) + ")");
  }
}

double dense_relative_error(const Matrix& xn, const HadamardFactors& f) {
  return (xn - f.reconstruct()).norm();
}

} // namespace

Vector bcd_row_solve(const Matrix& d1, const Matrix& d2, const Vector& h, const Vector& t) {
  if (d1.rows() != d2.rows() || d1.cols() != h.size() || t.size() != d1.rows()) {
    throw std::invalid_argument("bcd_row_solve: shape mismatch");
  }
  const Vector c = d1 * h;
  Matrix out(1, d2.cols());
  solve_rows(c, d2, t, out);
  return out.row(0).transpose();
}

RunRecord bcd(const MatrixHandle& x, Index r, const HadamardFactors& init,
              const SolverConfig& config) {
  config.validate();
  if (r < 1) throw std::invalid_argument("bcd: rank must be at least 1");
  const Index m = x.rows();
  const Index n = x.cols();
  check_dense_limit(m, n, "bcd");
  init.validate(m, n, r);

  RunRecord rec;
  rec.algorithm = "bcd";
  const double nx = x.norm();
  if (!std::isfinite(nx)) throw NumericalError("bcd: X has non-finite entries");
  if (nx == 0.0) {
    rec.factors = HadamardFactors::zeros(m, n, r);
    rec.stop = StopReason::zero_data;
    return rec;
  }
  if (!init.all_finite()) throw NumericalError("bcd: initial factors are not finite");
  const Matrix xn = x.to_dense() / nx;
  const Matrix xnt = xn.transpose();

  HadamardFactors committed = init;
  committed.scale_all(std::pow(nx, -0.25));
  double err = dense_relative_error(xn, committed);
  HadamardFactors y = committed;
  HadamardFactors fresh = committed;

  ExtrapolationState beta_state(config.extrapolation);
  ProgressTracker tracker(config, err);
  bool running = config.max_iters > 0 && err > config.tol;
  while (running) {
    const double beta = config.use_extrapolation ? beta_state.beta : 0.0;
    // W1: row i fits X(i,:) with c = H2 W2(i,:)^T.
    solve_rows(y.H2 * y.W2.transpose(), y.H1, xnt, fresh.W1);
    extrapolate(y.W1, fresh.W1, committed.W1, beta);
    solve_rows(y.W2 * y.H2.transpose(), y.W1, xn, fresh.H1);
    extrapolate(y.H1, fresh.H1, committed.H1, beta);
    solve_rows(y.H1 * y.W1.transpose(), y.H2, xnt, fresh.W2);
    extrapolate(y.W2, fresh.W2, committed.W2, beta);
    solve_rows(y.W1 * y.H1.transpose(), y.W2, xn, fresh.H2);
    extrapolate(y.H2, fresh.H2, committed.H2, beta);

    const double candidate = dense_relative_error(xn, fresh);
    if (!std::isfinite(candidate)) {
      throw NumericalError("bcd: non-finite iterate at iteration " +
                           std::to_string(tracker.iterations() + 1));
    }
    const bool accepted = candidate <= err;
    if (config.use_extrapolation) beta_state = update_beta(beta_state, accepted);
    if (accepted) {
      std::swap(committed, fresh);
      err = candidate;
    } else {
      y = committed;
    }
    running = tracker.record(candidate, accepted, beta);
    if (running && !accepted && !config.use_extrapolation) {
      tracker.stop(StopReason::stagnation);
      running = false;
    }
  }

  committed.scale_all(std::pow(nx, 0.25));
  rec.factors = std::move(committed);
  tracker.finish(rec);
  return rec;
}

Matrix hd_gradient(const Matrix& x, const HadamardFactors& f, FactorId which) {
  const Matrix x1 = f.W1 * f.H1.transpose();
  const Matrix x2 = f.W2 * f.H2.transpose();
  if (x1.rows() != x.rows() || x1.cols() != x.cols()) {
    throw std::invalid_argument("hd_gradient: shape mismatch");
  }
  const Matrix res = x1.cwiseProduct(x2) - x;
  switch (which) {
  case FactorId::W1: return 2.0 * res.cwiseProduct(x2) * f.H1;
  case FactorId::H1: return 2.0 * res.cwiseProduct(x2).transpose() * f.W1;
  case FactorId::W2: return 2.0 * res.cwiseProduct(x1) * f.H2;
  case FactorId::H2: return 2.0 * res.cwiseProduct(x1).transpose() * f.W2;
  }
  return {};
}

HadamardFactors scaled_gd_step(const HadamardFactors& f, const Matrix& x, double eta,
                               bool scaled) {
  if (!(eta > 0.0)) throw std::invalid_argument("scaled_gd_step: eta must be positive");
  HadamardFactors out = f;
  auto scaling = [&](const Matrix& partner) -> Matrix {
    const Index r = partner.cols();
    if (!scaled) return Matrix::Identity(r, r);
    const Matrix gram = partner.transpose() * partner;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() == Eigen::Success) return llt.solve(Matrix::Identity(r, r));
    return gram.completeOrthogonalDecomposition().pseudoInverse();
  };
  out.W1 -= eta * hd_gradient(x, out, FactorId::W1) * scaling(out.H1);
  out.H1 -= eta * hd_gradient(x, out, FactorId::H1) * scaling(out.W1);
  out.W2 -= eta * hd_gradient(x, out, FactorId::W2) * scaling(out.H2);
  out.H2 -= eta * hd_gradient(x, out, FactorId::H2) * scaling(out.W2);
  return out;
}

RunRecord scaled_gd(const MatrixHandle& x, Index r, const HadamardFactors& init,
                    const SolverConfig& config, double eta, bool scaled) {
  config.validate();
  if (!(eta > 0.0)) throw std::invalid_argument("scaled_gd: eta must be positive");
  if (r < 1) throw std::invalid_argument("scaled_gd: rank must be at least 1");
  const Index m = x.rows();
  const Index n = x.cols();
  check_dense_limit(m, n, "scaled_gd");
  init.validate(m, n, r);

  RunRecord rec;
  rec.algorithm = "scaledgd";
  const double nx = x.norm();
  if (!std::isfinite(nx)) throw NumericalError("scaled_gd: X has non-finite entries");
  if (nx == 0.0) {
    rec.factors = HadamardFactors::zeros(m, n, r);
    rec.stop = StopReason::zero_data;
    return rec;
  }
  const Matrix xn = x.to_dense() / nx;
  HadamardFactors current = init;
  current.scale_all(std::pow(nx, -0.25));
  double err = dense_relative_error(xn, current);

  ProgressTracker tracker(config, err);
  bool running = config.max_iters > 0 && err > config.tol;
  while (running) {
    HadamardFactors next = scaled_gd_step(current, xn, eta, scaled);
    double candidate = dense_relative_error(xn, next);
    if (!std::isfinite(candidate)) candidate = std::numeric_limits<double>::infinity();
    const bool accepted = candidate <= err;
    if (accepted) {
      current = std::move(next);
      err = candidate;
    } else {
      eta *= 0.5;
    }
    running = tracker.record(candidate, accepted, 0.0);
    if (running && !accepted && eta < 1e-300) {
      tracker.stop(StopReason::stagnation);
      running = false;
    }
  }
  current.scale_all(std::pow(nx, 0.25));
  rec.factors = std::move(current);
  tracker.finish(rec);
  return rec;
}

} // namespace hadfact
