#pragma once

// MatrixMarket coordinate reader. Accepts real/integer/pattern fields with
// general or symmetric symmetry; symmetric input is expanded to full storage.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "rooftrace/errors.hpp"
#include "rooftrace/sparse/crs.hpp"

namespace rooftrace::sparse {

namespace detail {
inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}
}  // namespace detail

inline SparseMatrixCRS read_matrix_market(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(source, 0, "empty file");
  ++lineno;

  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket")
    throw ParseError(source, lineno, "missing %%MatrixMarket banner");
  object = detail::lower(object);
  format = detail::lower(format);
  field = detail::lower(field);
  symmetry = detail::lower(symmetry);
  if (object != "matrix") throw ParseError(source, lineno, "unsupported object '" + object + "'");
  if (format != "coordinate")
    throw ParseError(source, lineno, "only coordinate format is supported, got '" + format + "'");
  const bool pattern = field == "pattern";
  if (field != "real" && field != "integer" && field != "double" && !pattern)
    throw ParseError(source, lineno, "unsupported field '" + field + "'");
  const bool symmetric = symmetry == "symmetric";
  if (symmetry != "general" && !symmetric)
    throw ParseError(source, lineno, "unsupported symmetry '" + symmetry + "'");

  // skip comments
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    break;
  }
  long long rows = 0, cols = 0, entries = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> entries))
      throw ParseError(source, lineno, "malformed size line");
    if (rows <= 0 || cols <= 0 || entries < 0)
      throw ParseError(source, lineno, "invalid matrix dimensions");
    if (symmetric && rows != cols)
      throw ParseError(source, lineno, "symmetric matrix must be square");
    if (rows > 0x7fffffff || cols > 0x7fffffff)
      throw ParseError(source, lineno, "matrix too large for 4-byte indices");
  }

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
  long long read = 0;
  while (read < entries && std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream es(line);
    long long i = 0, j = 0;
    double v = 1.0;
    if (!(es >> i >> j) || (!pattern && !(es >> v)))
      throw ParseError(source, lineno, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ParseError(source, lineno,
                       "index (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") out of range for " + std::to_string(rows) + "x" +
                           std::to_string(cols) + " matrix");
    const auto r = static_cast<Index>(i - 1), c = static_cast<Index>(j - 1);
    t.push_back({r, c, v});
    if (symmetric && r != c) t.push_back({c, r, v});
    ++read;
  }
  if (read != entries)
    throw ParseError(source, lineno,
                     "expected " + std::to_string(entries) + " entries, found " +
                         std::to_string(read));
  return from_triplets(static_cast<Index>(rows), static_cast<Index>(cols), std::move(t));
}

inline SparseMatrixCRS load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix_market(in, path);
}

// Writes general coordinate format (used for fixtures and round trips).
inline void write_matrix_market(std::ostream& os, const SparseMatrixCRS& m) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.n_rows << ' ' << m.n_cols << ' ' << m.n_nz() << '\n';
  os.precision(17);
  for (Index i = 0; i < m.n_rows; ++i)
    for (Index k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
      os << i + 1 << ' ' << m.col_idx[k] + 1 << ' ' << m.values[k] << '\n';
}

}  // namespace rooftrace::sparse
