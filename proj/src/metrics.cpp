#include "mogc/metrics.hpp"

#include <cmath>
#include <unordered_map>

namespace mogc {

ContingencyTable contingency(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw InvalidArgument("label vectors differ in length");
  std::unordered_map<int, int> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) continue;
    ra.emplace(a[i], static_cast<int>(ra.size()));
    rb.emplace(b[i], static_cast<int>(rb.size()));
  }
  ContingencyTable t;
  t.rows = static_cast<int>(ra.size());
  t.cols = static_cast<int>(rb.size());
  t.cell.assign(static_cast<std::size_t>(t.rows) * t.cols, 0);
  t.row_sum.assign(t.rows, 0);
  t.col_sum.assign(t.cols, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || b[i] < 0) continue;
    int x = ra[a[i]], y = rb[b[i]];
    t.cell[static_cast<std::size_t>(x) * t.cols + y]++;
    t.row_sum[x]++;
    t.col_sum[y]++;
    t.total++;
  }
  return t;
}

namespace {

long long choose2(long long n) { return n * (n - 1) / 2; }

}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  ContingencyTable t = contingency(a, b);
  long long sum_cells = 0, sum_rows = 0, sum_cols = 0;
  for (long long c : t.cell) sum_cells += choose2(c);
  for (long long r : t.row_sum) sum_rows += choose2(r);
  for (long long c : t.col_sum) sum_cols += choose2(c);
  long long pairs = choose2(t.total);
  if (pairs == 0) return 1.0;
  double expected = static_cast<double>(sum_rows) * static_cast<double>(sum_cols) / pairs;
  double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;
  return (sum_cells - expected) / (maximum - expected);
}

double rand_index(std::span<const int> a, std::span<const int> b) {
  ContingencyTable t = contingency(a, b);
  long long pairs = choose2(t.total);
  if (pairs == 0) return 1.0;
  long long sum_cells = 0, sum_rows = 0, sum_cols = 0;
  for (long long c : t.cell) sum_cells += choose2(c);
  for (long long r : t.row_sum) sum_rows += choose2(r);
  for (long long c : t.col_sum) sum_cols += choose2(c);
  long long agree = pairs + 2 * sum_cells - sum_rows - sum_cols;
  return static_cast<double>(agree) / pairs;
}

double normalized_mutual_information(std::span<const int> a, std::span<const int> b,
                                     NmiNorm norm) {
  ContingencyTable t = contingency(a, b);
  if (t.total == 0) return 1.0;
  double n = static_cast<double>(t.total);
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (long long r : t.row_sum)
    if (r > 0) ha -= r / n * std::log(r / n);
  for (long long c : t.col_sum)
    if (c > 0) hb -= c / n * std::log(c / n);
  for (int x = 0; x < t.rows; ++x)
    for (int y = 0; y < t.cols; ++y) {
      long long c = t.cell[static_cast<std::size_t>(x) * t.cols + y];
      if (c == 0) continue;
      mi += c / n *
            std::log(c * n / (static_cast<double>(t.row_sum[x]) * static_cast<double>(t.col_sum[y])));
    }
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double denom = norm == NmiNorm::arithmetic ? 0.5 * (ha + hb) : std::sqrt(ha * hb);
  if (denom == 0.0) return 0.0;
  return mi / denom;
}

}  // namespace mogc
