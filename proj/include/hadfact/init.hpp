#pragma once

#include "hadfact/factors.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hadfact {

enum class InitKind { svd, fs, fsl, fsr };

std::string to_string(InitKind kind);
/// Parses "svd", "fs", "fsl" or "fsr"; throws std::invalid_argument otherwise.
InitKind parse_init(const std::string& name);
std::vector<InitKind> all_inits();

/// Raised when a face-splitting initialization needs r^2 > min(m, n).
class InitUnavailable : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// False for the face-splitting family when r^2 > min(m, n).
bool init_available(InitKind kind, Index m, Index n, Index r);

/// X1 = sqrt(|X|), X2 = sign(X) .* X1, then Wi = Ui sqrt(Si), Hi = Vi sqrt(Si)
/// from rank-r truncated SVDs. Sparse X keeps its pattern in X1 and X2.
HadamardFactors init_svd_based(const MatrixHandle& x, Index r);

/// Projects both factors of the rank-r^2 truncated SVD onto the face-split sets.
HadamardFactors init_fs(const MatrixHandle& x, Index r);

/// Projects the right factor, refits the left one by least squares
/// (pseudo-inverse with rank tolerance 1e-10 sigma_1), then projects it.
HadamardFactors init_fsl(const MatrixHandle& x, Index r);

/// init_fsl on X^T with the roles of W and H exchanged.
HadamardFactors init_fsr(const MatrixHandle& x, Index r);

HadamardFactors initialize(InitKind kind, const MatrixHandle& x, Index r);

/// argmin_gamma ||X - gamma W H^T||_F = <X H, W> / <W^T W, H^T H>; 1 when the
/// denominator is at most 1e-300.
double optimal_gamma(const MatrixHandle& x, const Matrix& w, const Matrix& h);
/// Same for W = W1 • W2, H = H1 • H2.
double optimal_gamma(const MatrixHandle& x, const HadamardFactors& f);

/// Scales the factors so that W H^T becomes gamma* W H^T.
HadamardFactors apply_optimal_gamma(const MatrixHandle& x, const HadamardFactors& f);

} // namespace hadfact
