#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mogc {

// Thrown on malformed input files (message carries file:line context).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on structurally invalid requests (bad dimensions, empty rows, ...).
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative method cannot reach its required accuracy.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an enumeration exceeds its resource budget.
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-order chunked summation. Results do not depend on thread count:
// every reduction in the library funnels through these serial helpers or
// through sort-then-combine merges.
inline double det_sum(std::span<const double> x) {
  constexpr std::size_t chunk = 2048;
  double total = 0.0;
  for (std::size_t b = 0; b < x.size(); b += chunk) {
    double part = 0.0;
    std::size_t end = std::min(x.size(), b + chunk);
    for (std::size_t i = b; i < end; ++i) part += x[i];
    total += part;
  }
  return total;
}

inline double det_dot(std::span<const double> x, std::span<const double> y) {
  constexpr std::size_t chunk = 2048;
  double total = 0.0;
  for (std::size_t b = 0; b < x.size(); b += chunk) {
    double part = 0.0;
    std::size_t end = std::min(x.size(), b + chunk);
    for (std::size_t i = b; i < end; ++i) part += x[i] * y[i];
    total += part;
  }
  return total;
}

inline double det_norm2(std::span<const double> x) { return det_dot(x, x); }

// Platform-independent uniform [0,1) from a mt19937_64 draw.
inline double rng_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) without std::uniform_int_distribution (whose
// output is implementation-defined).
inline std::size_t rng_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng_unit(rng) * static_cast<double>(n)) % n;
}

}  // namespace mogc
