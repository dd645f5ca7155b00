#include "hadfact/metrics.hpp"

#include "hadfact/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace hadfact {

namespace {
constexpr Index kFullSpectrumLimit = 2000;
}

Vector tsvd_errors(const MatrixHandle& x, Index k) {
  const Index p = std::min(x.rows(), x.cols());
  if (k < 0 || k > p) throw std::invalid_argument("tsvd_errors: k out of range");
  const double total = x.squared_norm();
  Vector e = Vector::Zero(k + 1);
  if (total == 0.0) return e;
  if (!x.is_sparse() && p <= kFullSpectrumLimit) {
    const Vector s = full_svd(x.dense()).S;
    // tail(p) = sum_{i >= p} s_i^2, accumulated from the smallest values.
    Vector tail = Vector::Zero(s.size() + 1);
    for (Index i = s.size() - 1; i >= 0; --i) tail(i) = tail(i + 1) + s(i) * s(i);
    for (Index q = 0; q <= k; ++q) e(q) = std::sqrt(tail(q) / total);
    return e;
  }
  e(0) = 1.0;
  if (k == 0) return e;
  const Vector s = tsvd(x, k).S;
  double head = 0.0;
  for (Index q = 1; q <= k; ++q) {
    head += s(q - 1) * s(q - 1);
    e(q) = std::sqrt(std::max(0.0, total - head) / total);
  }
  if (k == p) e(k) = 0.0;
  return e;
}

RStar r_star_from_errors(const Vector& errors, Index r, double err_hd) {
  if (r < 1) throw std::invalid_argument("r_star: rank must be at least 1");
  const Index kmax = errors.size() - 1;
  RStar out;
  if (2 * r <= kmax && errors(2 * r) < err_hd) {
    Index best = 0;
    for (Index q = 0; q <= kmax; ++q) {
      if (errors(q) >= err_hd) best = q;
    }
    out.r_star = best;
  } else {
    out.r_star = kmax;
    out.capped = true;
    for (Index q = std::min<Index>(2 * r, kmax); q <= kmax; ++q) {
      if (errors(q) <= err_hd) {
        out.r_star = q;
        out.capped = false;
        break;
      }
    }
  }
  out.q_star = q_star(out.r_star, r);
  return out;
}

RStar r_star(const MatrixHandle& x, Index r, double err_hd) {
  const Index p = std::min(x.rows(), x.cols());
  if (!x.is_sparse() && p <= kFullSpectrumLimit) {
    return r_star_from_errors(tsvd_errors(x, p), r, err_hd);
  }
  Index k = std::min(p, std::max<Index>(4 * r, 2 * r + 10));
  while (true) {
    const Vector e = tsvd_errors(x, k);
    RStar out = r_star_from_errors(e, r, err_hd);
    if (!out.capped || k == p) {
      // A capped answer below the full rank only means the table was too short.
      if (out.capped && k == p) out.r_star = p;
      out.q_star = q_star(out.r_star, r);
      return out;
    }
    k = std::min(p, 2 * k);
  }
}

double q_star(Index r_star, Index r) {
  return static_cast<double>(r_star - 2 * r) / static_cast<double>(2 * r);
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
  case SyntheticKind::generic: return "generic";
  case SyntheticKind::lowrank: return "lowrank";
  case SyntheticKind::hd: return "hd";
  }
  return "unknown";
}

SyntheticKind parse_synthetic(const std::string& name) {
  if (name == "generic") return SyntheticKind::generic;
  if (name == "lowrank") return SyntheticKind::lowrank;
  if (name == "hd") return SyntheticKind::hd;
  throw std::invalid_argument("unknown synthetic kind '" + name + "' (generic|lowrank|hd)");
}

Matrix gen_synthetic(SyntheticKind kind, Index m, Index n, Index r, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_synthetic: sizes must be positive");
  if (kind != SyntheticKind::generic && r < 1) {
    throw std::invalid_argument("gen_synthetic: rank must be positive");
  }
  Rng rng(seed);
  switch (kind) {
  case SyntheticKind::generic: return rng.uniform_matrix(m, n);
  case SyntheticKind::lowrank: {
    const Matrix a = rng.uniform_matrix(m, 2 * r);
    const Matrix b = rng.uniform_matrix(2 * r, n);
    return a * b;
  }
  case SyntheticKind::hd: {
    const Matrix a1 = rng.uniform_matrix(m, r);
    const Matrix b1 = rng.uniform_matrix(r, n);
    const Matrix a2 = rng.uniform_matrix(m, r);
    const Matrix b2 = rng.uniform_matrix(r, n);
    return (a1 * b1).cwiseProduct(a2 * b2);
  }
  }
  throw std::invalid_argument("gen_synthetic: unknown kind");
}

SparseMatrix gen_sparse(Index m, Index n, double fill, std::uint64_t seed) {
  if (m < 1 || n < 1 || !(fill > 0.0 && fill <= 1.0)) {
    throw std::invalid_argument("gen_sparse: need positive sizes and fill in (0, 1]");
  }
  const auto total = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(n);
  const auto target = static_cast<std::uint64_t>(std::llround(fill * static_cast<double>(total)));
  Rng rng(seed);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(target * 2);
  std::vector<Triplet> entries;
  entries.reserve(target);
  while (entries.size() < target) {
    const std::uint64_t pos = rng.below(total);
    if (!seen.insert(pos).second) continue;
    const double v = rng.uniform();
    if (v == 0.0) {
      seen.erase(pos);
      continue;
    }
    entries.emplace_back(static_cast<Index>(pos / n), static_cast<Index>(pos % n), v);
  }
  SparseMatrix out(m, n);
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

} // namespace hadfact
