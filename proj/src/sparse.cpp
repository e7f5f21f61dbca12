#include "mogc/sparse.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mogc {

SparseSymMatrix SparseSymMatrix::from_triplets(int n, std::vector<Triplet> entries) {
  SparseSymMatrix out(n);
  for (auto& t : entries) {
    if (t.row > t.col) std::swap(t.row, t.col);
    if (t.row < 0 || t.col >= n)
      throw InvalidArgument("triplet index out of range");
  }
  // stable: duplicates merge in input order, keeping summation reproducible
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  out.upper_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    Triplet t = entries[i];
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].row == t.row && entries[j].col == t.col) {
      t.value += entries[j].value;
      ++j;
    }
    if (t.value != 0.0) out.upper_.push_back(t);
    i = j;
  }
  return out;
}

double SparseSymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& t : upper_) {
    double v2 = t.value * t.value;
    s += (t.row == t.col) ? v2 : 2.0 * v2;
  }
  return std::sqrt(s);
}

Csr SparseSymMatrix::to_csr() const {
  Csr c;
  c.n = n_;
  c.ptr.assign(n_ + 1, 0);
  for (const auto& t : upper_) {
    c.ptr[t.row + 1]++;
    if (t.row != t.col) c.ptr[t.col + 1]++;
  }
  for (int i = 0; i < n_; ++i) c.ptr[i + 1] += c.ptr[i];
  c.col.resize(c.ptr[n_]);
  c.val.resize(c.ptr[n_]);
  std::vector<std::int64_t> cur(c.ptr.begin(), c.ptr.end() - 1);
  // Upper triplets are sorted by (row, col); mirrored entries land in column
  // order too because the col index of a mirror equals the source row.
  for (const auto& t : upper_) {
    c.col[cur[t.row]] = t.col;
    c.val[cur[t.row]++] = t.value;
  }
  for (const auto& t : upper_) {
    if (t.row != t.col) {
      c.col[cur[t.col]] = t.row;
      c.val[cur[t.col]++] = t.value;
    }
  }
  // Mirrors of later rows interleave with upper entries, so sort each row.
  for (int i = 0; i < n_; ++i) {
    std::vector<std::pair<int, double>> row;
    row.reserve(c.ptr[i + 1] - c.ptr[i]);
    for (std::int64_t k = c.ptr[i]; k < c.ptr[i + 1]; ++k)
      row.emplace_back(c.col[k], c.val[k]);
    std::sort(row.begin(), row.end());
    std::int64_t k = c.ptr[i];
    for (const auto& [j, v] : row) {
      c.col[k] = j;
      c.val[k++] = v;
    }
  }
  return c;
}

std::vector<double> row_sums(const SparseSymMatrix& a) {
  std::vector<double> d(a.dim(), 0.0);
  for (const auto& t : a.upper()) {
    d[t.row] += t.value;
    if (t.row != t.col) d[t.col] += t.value;
  }
  return d;
}

void save_sparse(const std::filesystem::path& path, const SparseSymMatrix& a) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw ParseError("cannot open for writing: " + path.string());
  std::fprintf(f, "%d %zu\n", a.dim(), a.stored_nnz());
  for (const auto& t : a.upper())
    std::fprintf(f, "%d %d %.17g\n", t.row, t.col, t.value);
  std::fclose(f);
}

SparseSymMatrix load_sparse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path.string());
  std::string line;
  int n = -1;
  std::size_t nnz = 0;
  std::vector<Triplet> entries;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    if (n < 0) {
      if (!(ss >> n >> nnz) || n < 0)
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad header");
      entries.reserve(nnz);
      continue;
    }
    Triplet t;
    if (!(ss >> t.row >> t.col >> t.value))
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad entry");
    if (t.row > t.col || t.row < 0 || t.col >= n)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": index out of range");
    entries.push_back(t);
  }
  if (n < 0) throw ParseError(path.string() + ": missing header");
  if (entries.size() != nnz)
    throw ParseError(path.string() + ": entry count does not match header");
  // Entries were written sorted and merged; from_triplets re-validates.
  return SparseSymMatrix::from_triplets(n, std::move(entries));
}

void csr_matvec_serial(const Csr& a, const double* x, double* y) {
  for (int i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::int64_t k = a.ptr[i]; k < a.ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

void csr_matvec(const Csr& a, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::int64_t k = a.ptr[i]; k < a.ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

}  // namespace mogc
