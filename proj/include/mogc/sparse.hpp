#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mogc/common.hpp"

namespace mogc {

// One stored entry of a symmetric matrix, upper triangle: row <= col.
struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Full symmetric expansion in CSR form, used by the numeric kernels.
struct Csr {
  int n = 0;
  std::vector<std::int64_t> ptr;  // size n+1
  std::vector<int> col;
  std::vector<double> val;
};

// Symmetric sparse matrix storing the upper triangle (row <= col) as sorted,
// duplicate-free triplets with nonzero values.  Equality is bit-exact.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(int n) : n_(n) {
    if (n < 0) throw InvalidArgument("matrix dimension must be non-negative");
  }

  // Sorts, merges duplicates by summation, drops entries that cancel to zero.
  // Entries below the diagonal are mirrored into the upper triangle first.
  static SparseSymMatrix from_triplets(int n, std::vector<Triplet> entries);

  int dim() const { return n_; }
  std::size_t stored_nnz() const { return upper_.size(); }
  const std::vector<Triplet>& upper() const { return upper_; }

  double frobenius_norm() const;
  Csr to_csr() const;

  friend bool operator==(const SparseSymMatrix&, const SparseSymMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<Triplet> upper_;
};

// Exact row sums of the symmetric expansion (diagonal counted once).
std::vector<double> row_sums(const SparseSymMatrix& a);

// Text format: header "n nnz", then one "i j value" line per stored upper
// entry.  Values are written with enough digits to round-trip bit-exactly.
void save_sparse(const std::filesystem::path& path, const SparseSymMatrix& a);
SparseSymMatrix load_sparse(const std::filesystem::path& path);

// y = A x on the symmetric expansion.  The parallel version assigns whole
// rows to threads, so it matches the serial one bitwise.
void csr_matvec(const Csr& a, const double* x, double* y);
void csr_matvec_serial(const Csr& a, const double* x, double* y);

}  // namespace mogc
