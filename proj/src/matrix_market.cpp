#include "ppk/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ppk {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void fail(const std::string& name, long line, const std::string& msg) {
  throw MatrixMarketError(name + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in, const std::string& name) {
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) fail(name, 1, "empty file");
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") fail(name, lineno, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate")
    fail(name, lineno, "only coordinate-format matrices are supported");
  if (field != "real" && field != "integer")
    fail(name, lineno, "unsupported field type: " + field);
  const bool symmetric = symmetry == "symmetric";
  const bool skew = symmetry == "skew-symmetric";
  if (!symmetric && !skew && symmetry != "general")
    fail(name, lineno, "unsupported symmetry: " + symmetry);

  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream hdr(line);
    if (!(hdr >> rows >> cols >> nnz)) fail(name, lineno, "bad size line");
    break;
  }
  if (rows < 0) fail(name, lineno, "missing size line");
  if (rows != cols) fail(name, lineno, "square matrix required");

  struct Entry {
    int r, c;
    double v;
  };
  std::vector<Entry> entries;
  entries.reserve(nnz * (symmetric || skew ? 2 : 1));
  long read = 0;
  while (read < nnz) {
    if (!std::getline(in, line)) fail(name, lineno + 1, "unexpected end of file");
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream es(line);
    long i, j;
    double v;
    if (!(es >> i >> j >> v)) fail(name, lineno, "bad entry line");
    if (i < 1 || i > rows || j < 1 || j > cols) fail(name, lineno, "index out of range");
    entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    if ((symmetric || skew) && i != j)
      entries.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), skew ? -v : v});
    ++read;
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });

  SparseMatrix m;
  m.n = static_cast<int>(rows);
  m.row_offsets.assign(m.n + 1, 0);
  m.col_indices.reserve(entries.size());
  m.values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    // duplicates summed
    if (!m.values.empty() && k > 0 && entries[k].r == entries[k - 1].r &&
        entries[k].c == entries[k - 1].c) {
      m.values.back() += entries[k].v;
      continue;
    }
    m.col_indices.push_back(entries[k].c);
    m.values.push_back(entries[k].v);
    ++m.row_offsets[entries[k].r + 1];
  }
  for (int i = 0; i < m.n; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
  return m;
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError("cannot open " + path);
  return read_matrix_market(in, path);
}

void write_matrix_market(const SparseMatrix& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n << " " << m.n << " " << m.nnz() << "\n";
  char buf[64];
  for (int i = 0; i < m.n; ++i)
    for (std::int64_t k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i + 1, m.col_indices[k] + 1, m.values[k]);
      out << buf;
    }
}

void write_matrix_market(const SparseMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MatrixMarketError("cannot open " + path + " for writing");
  write_matrix_market(m, out);
}

}  // namespace ppk
