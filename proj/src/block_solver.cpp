#include "hadfact/block_solvers.hpp"

#include "hadfact/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

namespace hadfact {

namespace {

constexpr double kStepCap = 0.95;
constexpr double kTinyNorm = 1e-15;

enum class InnerStep { projection, flow };

// Rows of the data seen by one block: X for the W-block, X^T for the H-block.
struct RowSource {
  const Matrix* dense = nullptr; // the full dense X
  bool transposed = false;       // use rows of X^T when dense
  const SparseMatrix* sparse = nullptr;
};

// Column norms of hf with the small-norm guard of the rescaling step.
Vector guarded_norms(const Matrix& hf) {
  Vector n = hf.colwise().norm().transpose();
  for (Index j = 0; j < n.size(); ++j) {
    if (n(j) < kTinyNorm) n(j) = 1.0;
  }
  return n;
}

// Updates one block. (l1, l2) are the extrapolated rows being updated, (f1, f2)
// the fixed opposite factors. The rescaled quantities of Eq. (13) are never
// stored: with D = diag(n1) kron diag(n2), H^p = face_split(f1, f2) D^-1 and
// the scaled W rows are l1 .* n1, l2 .* n2.
void block_update(const RowSource& src, double scale, const Matrix& l1, const Matrix& l2,
                  const Matrix& f1, const Matrix& f2, const SolverConfig& cfg, int inner,
                  InnerStep step, Matrix& out1, Matrix& out2,
                  FlowDiagnostics& diag) {
  const Index r = l1.cols();
  const Index rr = r * r;
  const Index rows = l1.rows();

  Vector n1 = Vector::Ones(r), n2 = Vector::Ones(r);
  if (cfg.use_rescaling) {
    n1 = guarded_norms(f1);
    n2 = guarded_norms(f2);
  }
  Vector dinv(rr);
  for (Index p = 0; p < r; ++p) {
    for (Index q = 0; q < r; ++q) dinv(p * r + q) = 1.0 / (n1(p) * n2(q));
  }
  const Matrix a_gram = dinv.asDiagonal() * face_split_gram(f1, f2) * dinv.asDiagonal();
  const double lip = lipschitz(a_gram);
  const double alpha = lip > 0.0 ? cfg.tau / lip : 0.0;

  Matrix b_dense;
  if (src.dense != nullptr) {
    const Matrix hp = face_split(f1, f2) * dinv.asDiagonal();
    if (src.transposed) {
      b_dense.noalias() = src.dense->transpose() * hp;
    } else {
      b_dense.noalias() = *src.dense * hp;
    }
    b_dense *= scale;
  }

  Vector bi(rr), w(rr), g(rr), u(r), v(r), a(r), b(r);
  Matrix block(r, r);
  for (Index i = 0; i < rows; ++i) {
    if (src.dense != nullptr) {
      bi = b_dense.row(i).transpose();
    } else {
      bi.setZero();
      const SparseMatrix& s = *src.sparse;
      for (SparseMatrix::InnerIterator it(s, i); it; ++it) {
        const Index j = it.col();
        const double c = scale * it.value();
        for (Index p = 0; p < r; ++p) u(p) = c * f1(j, p) / n1(p);
        for (Index q = 0; q < r; ++q) v(q) = f2(j, q) / n2(q);
        for (Index p = 0; p < r; ++p) {
          double* dst = bi.data() + p * r;
          const double up = u(p);
          for (Index q = 0; q < r; ++q) dst[q] += up * v(q);
        }
      }
    }
    a = l1.row(i).transpose().cwiseProduct(n1);
    b = l2.row(i).transpose().cwiseProduct(n2);
    for (int t = 0; t < inner; ++t) {
      for (Index p = 0; p < r; ++p) w.segment(p * r, r) = a(p) * b;
      g.noalias() = a_gram * w;
      g -= bi;
      if (step == InnerStep::projection) {
        Eigen::Map<Vector>(block.data(), rr) = w - alpha * g;
        rank1_split(block, a, b);
      } else if (alpha > 0.0) {
        euler_row_step(a, b, g.data(), alpha, diag);
      }
    }
    out1.row(i) = a.cwiseQuotient(n1).transpose();
    out2.row(i) = b.cwiseQuotient(n2).transpose();
  }
}

// y <- n + beta (n - c)
void extrapolate(Matrix& y, const Matrix& n, const Matrix& c, double beta) {
  if (beta == 0.0) {
    y = n;
  } else {
    y = n + beta * (n - c);
  }
}

// Equalizes the column norms of each (W_k, H_k) pair of `ref`, applying the
// same diagonal gauge to `others`. The rescaled block updates and the product
// are invariant under it; without it a vanishing H column drags its W column
// towards overflow, and once the norm guard fires the stale scale swamps the
// rank-one projection.
void balance_columns(const HadamardFactors& ref, std::initializer_list<HadamardFactors*> others) {
  const auto gauge = [](const Matrix& w, const Matrix& h) {
    Vector s = Vector::Ones(w.cols());
    for (Index p = 0; p < w.cols(); ++p) {
      const double nw = w.col(p).norm();
      const double nh = h.col(p).norm();
      if (!(nw > 0.0) || !(nh > 0.0)) continue;
      const double sp = std::sqrt(nh / nw);
      if (std::isfinite(sp) && sp > 0.0) s(p) = sp;
    }
    return s;
  };
  // gauges first: `ref` is usually one of `others`
  const Vector s1 = gauge(ref.W1, ref.H1);
  const Vector s2 = gauge(ref.W2, ref.H2);
  for (HadamardFactors* f : others) {
    for (Index p = 0; p < s1.size(); ++p) {
      f->W1.col(p) *= s1(p);
      f->H1.col(p) /= s1(p);
      f->W2.col(p) *= s2(p);
      f->H2.col(p) /= s2(p);
    }
  }
}

// Relative error of f against X / ||X|| (scale = 1 / ||X||). Dense data is
// compared entry-wise: the expanded formula loses accuracy once the error
// falls below ~1e-7, which matters for exactly decomposable inputs.
double normalized_error(const MatrixHandle& x, const HadamardFactors& f, double scale) {
  if (!x.is_sparse()) return (scale * x.dense() - f.reconstruct()).norm();
  const double sq = 1.0 - 2.0 * scale * hd_inner(x, f) + hd_squared_norm(f);
  return std::sqrt(std::max(0.0, sq));
}

RunRecord run_block_solver(const MatrixHandle& x, Index r, const HadamardFactors& init,
                           const SolverConfig& config, InnerStep step, const char* name) {
  config.validate();
  if (r < 1) throw std::invalid_argument(std::string(name) + ": rank must be at least 1");
  const Index m = x.rows();
  const Index n = x.cols();
  init.validate(m, n, r);

  RunRecord rec;
  rec.algorithm = name;
  const double nx = x.norm();
  if (!std::isfinite(nx)) throw NumericalError(std::string(name) + ": X has non-finite entries");
  if (nx == 0.0) {
    rec.factors = HadamardFactors::zeros(m, n, r);
    rec.stop = StopReason::zero_data;
    return rec;
  }
  if (!init.all_finite()) {
    throw NumericalError(std::string(name) + ": initial factors are not finite");
  }
  const double scale = 1.0 / nx;

  HadamardFactors committed = init;
  committed.scale_all(std::pow(nx, -0.25));
  double err = normalized_error(x, committed, scale);
  balance_columns(committed, {&committed});
  HadamardFactors y = committed;
  HadamardFactors fresh = committed;

  RowSource wsrc, hsrc;
  SparseMatrix xt;
  if (x.is_sparse()) {
    xt = x.sparse().transpose();
    wsrc.sparse = &x.sparse();
    hsrc.sparse = &xt;
  } else {
    wsrc.dense = &x.dense();
    hsrc.dense = &x.dense();
    hsrc.transposed = true;
  }

  ExtrapolationState beta_state(config.extrapolation);
  ProgressTracker tracker(config, err);
  bool running = config.max_iters > 0 && err > config.tol;
  while (running) {
    const double beta = config.use_extrapolation ? beta_state.beta : 0.0;

    block_update(wsrc, scale, y.W1, y.W2, y.H1, y.H2, config, config.kw, step,
                 fresh.W1, fresh.W2, rec.flow);
    extrapolate(y.W1, fresh.W1, committed.W1, beta);
    extrapolate(y.W2, fresh.W2, committed.W2, beta);

    block_update(hsrc, scale, y.H1, y.H2, y.W1, y.W2, config, config.kh, step,
                 fresh.H1, fresh.H2, rec.flow);
    extrapolate(y.H1, fresh.H1, committed.H1, beta);
    extrapolate(y.H2, fresh.H2, committed.H2, beta);

    const double candidate = normalized_error(x, fresh, scale);
    if (!std::isfinite(candidate) || !fresh.all_finite()) {
      throw NumericalError(std::string(name) + ": non-finite iterate at iteration " +
                           std::to_string(tracker.iterations() + 1));
    }
    const bool accepted = candidate <= err;
    balance_columns(accepted ? fresh : committed, {&fresh, &committed, &y});
    if (config.use_extrapolation) beta_state = update_beta(beta_state, accepted);
    if (accepted) {
      std::swap(committed, fresh);
      err = candidate;
    } else {
      y = committed;
    }
    running = tracker.record(candidate, accepted, beta);
    // Without extrapolation a rejected step would be recomputed identically.
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

} // namespace

void euler_row_step(Eigen::Ref<Vector> a, Eigen::Ref<Vector> b, const double* g, double h,
                    FlowDiagnostics& diag) {
  const Index r = a.size();
  double mu = a.norm();
  double nu = b.norm();
  double rho = mu * nu;
  if (!(rho > 0.0)) return;
  for (Index k = 0; k < r * r; ++k) {
    if (!std::isfinite(g[k])) throw NumericalError("manbcd: non-finite gradient entry");
  }
  const Eigen::Map<const Matrix> gi(g, r, r);
  const Vector x = a / mu;
  const Vector y = b / nu;
  const Vector gx = gi * x;
  const Vector gty = gi.transpose() * y;
  const double theta = y.dot(gx);

  double hi = h;
  if (theta > 0.0) hi = std::min(h, kStepCap * rho / theta);
  const double radicand = 1.0 - theta * hi / rho;
  if (theta > 0.0) diag.min_omega_radicand = std::min(diag.min_omega_radicand, radicand);
  const double omega = std::sqrt(radicand);

  const double ratio = mu / nu;
  mu *= omega;
  nu *= omega;
  rho = mu * nu;
  diag.max_ratio_drift = std::max(diag.max_ratio_drift, std::abs(mu / nu - ratio) / ratio);

  Vector xn = x + (hi / rho) * (theta * x - gty);
  Vector yn = y + (hi / rho) * (theta * y - gx);
  const double nxn = xn.norm();
  const double nyn = yn.norm();
  diag.max_norm_drift = std::max({diag.max_norm_drift, std::abs(nxn - 1.0), std::abs(nyn - 1.0)});
  xn /= nxn;
  yn /= nyn;
  diag.max_norm_error =
      std::max({diag.max_norm_error, std::abs(xn.norm() - 1.0), std::abs(yn.norm() - 1.0)});
  ++diag.steps;

  a = mu * xn;
  b = nu * yn;
}

FaceSplitPoint manbcd_euler_step(const FaceSplitPoint& p, const Matrix& g, double h,
                                 FlowDiagnostics* diag) {
  const Index r = p.rank();
  if (g.rows() != p.rows() || g.cols() != r * r) {
    throw std::invalid_argument("manbcd_euler_step: gradient must be " + std::to_string(p.rows()) +
                                "x" + std::to_string(r * r));
  }
  if (!(h > 0.0)) throw std::invalid_argument("manbcd_euler_step: step size must be positive");
  FlowDiagnostics local;
  Matrix w1 = p.W1();
  Matrix w2 = p.W2();
  Vector a(r), b(r), gi(r * r);
  for (Index i = 0; i < p.rows(); ++i) {
    a = w1.row(i).transpose();
    b = w2.row(i).transpose();
    gi = g.row(i).transpose();
    euler_row_step(a, b, gi.data(), h, local);
    w1.row(i) = a.transpose();
    w2.row(i) = b.transpose();
  }
  if (diag != nullptr) diag->merge(local);
  return FaceSplitPoint(std::move(w1), std::move(w2));
}

RunRecord projbcd(const MatrixHandle& x, Index r, const HadamardFactors& init,
                  const SolverConfig& config) {
  return run_block_solver(x, r, init, config, InnerStep::projection, "projbcd");
}

RunRecord manbcd(const MatrixHandle& x, Index r, const HadamardFactors& init,
                 const SolverConfig& config) {
  return run_block_solver(x, r, init, config, InnerStep::flow, "manbcd");
}

} // namespace hadfact
