#pragma once

// Seeded generators for random trials. Built directly on mt19937_64 output so
// that a seed reproduces the same trials on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "prodsys/hyperspace.hpp"
#include "prodsys/linalg.hpp"
#include "prodsys/rational.hpp"

namespace prodsys::gen {

using Rng = std::mt19937_64;

/// Uniform on [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform on {lo, ..., hi}.
inline std::uint64_t uniform_int(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

/// Entries with real and imaginary parts uniform on [-1, 1).
inline linalg::ComplexMatrix complex_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  linalg::ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = 2.0 * uniform01(rng) - 1.0;
      const double im = 2.0 * uniform01(rng) - 1.0;
      m(i, j) = {re, im};
    }
  }
  return m;
}

inline linalg::ComplexVector complex_vector(Rng& rng, std::size_t dim) {
  return complex_matrix(rng, dim, 1).col(0);
}

/// Normalised, never too close to zero before normalisation.
inline linalg::ComplexVector unit_vector(Rng& rng, std::size_t dim) {
  for (;;) {
    linalg::ComplexVector v = complex_vector(rng, dim);
    if (v.norm() > 0.1) return v.normalized();
  }
}

/// sigma_max in (0, 1]; exactly 1 when `scale` is 1.
inline linalg::ComplexMatrix contraction(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  linalg::ComplexMatrix m = complex_matrix(rng, rows, cols);
  return m * (scale / linalg::operator_norm(m));
}

/// p/q with 1 <= q <= max_den and 0 <= p <= q.
inline Rational unit_rational(Rng& rng, std::uint64_t max_den) {
  const auto q = uniform_int(rng, 1, max_den);
  const auto p = uniform_int(rng, 0, q);
  return {static_cast<long long>(p), static_cast<long long>(q)};
}

/// Up to `max_parts` points or intervals with denominators <= max_den; empty
/// with probability about 1 / (max_parts + 1).
inline hyperspace::ClosedSet closed_set(Rng& rng, std::uint64_t max_den, std::uint64_t max_parts) {
  const auto parts = uniform_int(rng, 0, max_parts);
  std::vector<hyperspace::Interval> raw;
  for (std::uint64_t i = 0; i < parts; ++i) {
    Rational a = unit_rational(rng, max_den);
    if (rng() % 2 == 0) {
      raw.push_back({a, a});
    } else {
      Rational b = unit_rational(rng, max_den);
      if (b < a) std::swap(a, b);
      raw.push_back({a, b});
    }
  }
  return hyperspace::ClosedSet::normalize(std::move(raw));
}

/// A closed set with nonempty interior.
inline hyperspace::ClosedSet closed_set_with_interior(Rng& rng, std::uint64_t max_den,
                                                      std::uint64_t max_parts) {
  for (;;) {
    const auto z = closed_set(rng, max_den, max_parts);
    if (!hyperspace::cb_derivative(z).empty()) return z;
  }
}

}  // namespace prodsys::gen
