#include "hadfact/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hadfact::io {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little,
              "HDMAT encoding assumes a little-endian host");

constexpr std::array<char, 6> kHdmatMagic = {'H', 'D', 'M', 'A', 'T', '1'};

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_double(std::string_view token, const fs::path& path, std::size_t line) {
  double value = 0.0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": not a number: '" +
                  std::string(token) + "'");
  }
  return value;
}

// Reads the next whitespace-delimited PGM token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c = 0;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

long pgm_int(std::istream& in, const fs::path& path) {
  const std::string tok = pgm_token(in);
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || value < 0) {
    throw IoError(path.string() + ": malformed PGM header");
  }
  return value;
}

} // namespace

MatrixHandle read_matrix_market(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  std::istringstream banner(lower(line));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix") {
    throw IoError(path.string() + ":1: missing %%MatrixMarket matrix banner");
  }
  if (format != "coordinate") throw IoError(path.string() + ":1: only coordinate format is supported");
  if (field != "real" && field != "integer" && field != "pattern" && field != "double") {
    throw IoError(path.string() + ":1: unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric") {
    throw IoError(path.string() + ":1: unsupported symmetry '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";

  std::size_t lineno = 1;
  long long rows = -1, cols = -1, entries = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad size line");
    }
    break;
  }
  if (rows < 0) throw IoError(path.string() + ": missing size line");

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(entries) * (symmetry == "general" ? 1 : 2));
  long long seen = 0;
  while (seen < entries && std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 1.0;
    if (!(entry >> i >> j) || (!pattern && !(entry >> v))) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad entry");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": index out of range");
    }
    triplets.emplace_back(i - 1, j - 1, v);
    if (symmetry != "general" && i != j) {
      triplets.emplace_back(j - 1, i - 1, symmetry == "skew-symmetric" ? -v : v);
    }
    ++seen;
  }
  if (seen != entries) {
    throw IoError(path.string() + ": expected " + std::to_string(entries) + " entries, found " +
                  std::to_string(seen));
  }
  return MatrixHandle::from_triplets(rows, cols, triplets);
}

void write_matrix_market(const fs::path& path, const MatrixHandle& x) {
  const SparseMatrix s = x.to_sparse();
  auto out = open_out(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << s.rows() << ' ' << s.cols() << ' ' << s.nonZeros() << '\n';
  out.precision(17);
  for (Index i = 0; i < s.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(s, i); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_csv(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace_if(line.begin(), line.end(), [](char c) { return c == ',' || c == ';' || c == '\r'; }, ' ');
    std::istringstream tokens(line);
    std::string tok;
    std::vector<double> row;
    while (tokens >> tok) {
      if (row.empty() && tok[0] == '#') break;
      row.push_back(parse_double(tok, path, lineno));
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(rows.front().size()) + " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path.string() + ": no data");
  Matrix x(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) x(i, j) = rows[i][j];
  return x;
}

void write_csv(const fs::path& path, const Matrix& x) {
  auto out = open_out(path);
  out.precision(17);
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j) out << ',';
      out << x(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_hdmat(const fs::path& path) {
  auto in = open_in(path, std::ios::binary);
  std::array<char, 6> magic{};
  std::uint64_t rows = 0, cols = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || magic != kHdmatMagic) throw IoError(path.string() + ": not an HDMAT1 file");
  const auto expected = fs::file_size(path);
  if (rows != 0 && cols > (expected / sizeof(double)) / rows) {
    throw IoError(path.string() + ": truncated payload");
  }
  if (expected != 22 + rows * cols * sizeof(double)) throw IoError(path.string() + ": truncated payload");
  Matrix x(static_cast<Index>(rows), static_cast<Index>(cols));
  in.read(reinterpret_cast<char*>(x.data()), static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!in) throw IoError(path.string() + ": truncated payload");
  return x;
}

void write_hdmat(const fs::path& path, const Matrix& x) {
  auto out = open_out(path, std::ios::binary);
  const auto rows = static_cast<std::uint64_t>(x.rows());
  const auto cols = static_cast<std::uint64_t>(x.cols());
  out.write(kHdmatMagic.data(), kHdmatMagic.size());
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  out.write(reinterpret_cast<const char*>(x.data()), static_cast<std::streamsize>(x.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_pgm(const fs::path& path) {
  auto in = open_in(path, std::ios::binary);
  const std::string kind = pgm_token(in);
  if (kind != "P2" && kind != "P5") throw IoError(path.string() + ": not a grayscale PGM (P2/P5)");
  const long width = pgm_int(in, path);
  const long height = pgm_int(in, path);
  const long maxval = pgm_int(in, path);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) {
    throw IoError(path.string() + ": malformed PGM header");
  }
  Matrix x(height, width);
  if (kind == "P2") {
    for (long i = 0; i < height; ++i)
      for (long j = 0; j < width; ++j) {
        const long v = pgm_int(in, path);
        x(i, j) = static_cast<double>(std::min(v, maxval)) / static_cast<double>(maxval);
      }
    return x;
  }
  const int bytes = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> buf(static_cast<std::size_t>(width * height * bytes));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!in) throw IoError(path.string() + ": truncated PGM raster");
  for (long i = 0; i < height; ++i)
    for (long j = 0; j < width; ++j) {
      const std::size_t k = static_cast<std::size_t>((i * width + j) * bytes);
      const long v = bytes == 1 ? buf[k] : (buf[k] << 8 | buf[k + 1]);
      x(i, j) = static_cast<double>(std::min(v, maxval)) / static_cast<double>(maxval);
    }
  return x;
}

void write_pgm(const fs::path& path, const Matrix& x) {
  auto out = open_out(path, std::ios::binary);
  out << "P5\n" << x.cols() << ' ' << x.rows() << "\n255\n";
  std::vector<unsigned char> buf(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) {
      const double v = std::clamp(x(i, j), 0.0, 1.0);
      buf[static_cast<std::size_t>(i * x.cols() + j)] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

MatrixHandle read_matrix(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  const std::string ext = lower(path.extension().string());
  if (ext == ".mtx") return read_matrix_market(path);
  if (ext == ".csv" || ext == ".txt") return MatrixHandle(read_csv(path));
  if (ext == ".hdmat") return MatrixHandle(read_hdmat(path));
  if (ext == ".pgm") return MatrixHandle(read_pgm(path));
  throw IoError(path.string() + ": unrecognized extension '" + ext + "'");
}

} // namespace hadfact::io
