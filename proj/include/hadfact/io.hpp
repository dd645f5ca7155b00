#pragma once

#include "hadfact/matrix.hpp"

#include <filesystem>
#include <stdexcept>

namespace hadfact::io {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// MatrixMarket coordinate format. Reads real/integer/pattern fields with
/// general, symmetric or skew-symmetric symmetry; duplicate entries are summed.
MatrixHandle read_matrix_market(const std::filesystem::path& path);
void write_matrix_market(const std::filesystem::path& path, const MatrixHandle& x);

/// Dense CSV, one matrix row per line. Commas, semicolons or whitespace
/// separate values; blank lines and lines starting with '#' are skipped.
Matrix read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Matrix& x);

/// Raw dense binary: magic "HDMAT1", u64 rows, u64 cols (little endian),
/// then rows*cols little-endian float64 values in column-major order.
Matrix read_hdmat(const std::filesystem::path& path);
void write_hdmat(const std::filesystem::path& path, const Matrix& x);

/// Grayscale PGM (P2 or P5). Pixel values are divided by maxval, giving [0,1].
Matrix read_pgm(const std::filesystem::path& path);
/// Writes a binary P5 image with maxval 255; values are clamped to [0,1] first.
void write_pgm(const std::filesystem::path& path, const Matrix& x);

/// Dispatches on the extension: .mtx, .csv, .hdmat, .pgm.
MatrixHandle read_matrix(const std::filesystem::path& path);

} // namespace hadfact::io
