#pragma once

#include "hadfact/matrix.hpp"

#include <cstdint>
#include <string>

namespace hadfact {

/// Relative truncated-SVD errors e(0..k): e(p) = sqrt(sum_{i>p} sigma_i^2) / ||X||_F.
/// The tail is summed exactly when the full spectrum is computed (dense X with
/// min(m, n) <= 2000), otherwise it is ||X||^2 minus the leading sum.
Vector tsvd_errors(const MatrixHandle& x, Index k);

struct RStar {
  Index r_star = 0;
  double q_star = 0.0;
  bool capped = false; // err_hd is below every computable TSVD error
};

/// r* from a table of TSVD errors e(0..K) (nonincreasing). If e(2r) < err_hd,
/// r* = max{p : e(p) >= err_hd}; otherwise r* = min{p : e(p) <= err_hd}.
RStar r_star_from_errors(const Vector& errors, Index r, double err_hd);

/// Computes as many singular values as the search needs.
RStar r_star(const MatrixHandle& x, Index r, double err_hd);

/// (r* - 2r) / (2r).
double q_star(Index r_star, Index r);

enum class SyntheticKind { generic, lowrank, hd };

std::string to_string(SyntheticKind kind);
SyntheticKind parse_synthetic(const std::string& name);

/// generic: i.i.d. uniform[0,1); lowrank: U(m x 2r) * U(2r x n);
/// hd: (U(m x r) * U(r x n)) .* (U(m x r) * U(r x n)). Matrices are filled row
/// by row, in the order listed, from one Rng(seed).
Matrix gen_synthetic(SyntheticKind kind, Index m, Index n, Index r, std::uint64_t seed);

/// Sparse m x n matrix with round(fill * m * n) distinct positions and
/// uniform[0,1) values.
SparseMatrix gen_sparse(Index m, Index n, double fill, std::uint64_t seed);

} // namespace hadfact
