#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial` is the
// reference implementation used by tests, `parallel` is the OpenMP version the
// library calls. Both must agree bit-for-bit on integer/rational inputs and to
// rounding on floating-point inputs.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace prodsys::kernels {

/// Row-index layout: slot 0 is the most significant base-g digit.
std::size_t ipow(std::size_t base, std::size_t exp);

namespace serial {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Applies `op` (g x g) to tensor slot `slot` of every column of `state`
/// (rows = g^n).
Eigen::MatrixXcd apply_slot(const Eigen::MatrixXcd& state, const Eigen::MatrixXcd& op,
                            std::size_t g, std::size_t n, std::size_t slot);

/// q[A] = Re tr(rho * prod_{i in A} P_i) for every cell mask A, where P_i is
/// `slot_projector` acting on slot i of (C^g)^{(x)n}.
std::vector<double> miss_probabilities(const Eigen::MatrixXcd& rho,
                                       const Eigen::MatrixXcd& slot_projector, std::size_t g,
                                       std::size_t n);

/// f[S] <- sum_{R subset of S} f[R]
template <typename T>
void subset_sum(std::vector<T>& f, unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  for (unsigned b = 0; b < n; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t s = 0; s < size; ++s) {
      if (s & bit) f[s] += f[s ^ bit];
    }
  }
}

/// Inverse of subset_sum: f[S] <- sum_{R subset of S} (-1)^{|S\R|} f[R]
template <typename T>
void mobius(std::vector<T>& f, unsigned n) {
  const std::size_t size = std::size_t{1} << n;
  for (unsigned b = 0; b < n; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t s = 0; s < size; ++s) {
      if (s & bit) f[s] -= f[s ^ bit];
    }
  }
}

}  // namespace serial

namespace parallel {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

Eigen::MatrixXcd apply_slot(const Eigen::MatrixXcd& state, const Eigen::MatrixXcd& op,
                            std::size_t g, std::size_t n, std::size_t slot);

std::vector<double> miss_probabilities(const Eigen::MatrixXcd& rho,
                                       const Eigen::MatrixXcd& slot_projector, std::size_t g,
                                       std::size_t n);

template <typename T>
void subset_sum(std::vector<T>& f, unsigned n) {
  const auto size = static_cast<std::int64_t>(std::size_t{1} << n);
  for (unsigned b = 0; b < n; ++b) {
    const std::int64_t bit = std::int64_t{1} << b;
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < size; ++s) {
      if (s & bit) f[s] += f[s ^ bit];
    }
  }
}

template <typename T>
void mobius(std::vector<T>& f, unsigned n) {
  const auto size = static_cast<std::int64_t>(std::size_t{1} << n);
  for (unsigned b = 0; b < n; ++b) {
    const std::int64_t bit = std::int64_t{1} << b;
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < size; ++s) {
      if (s & bit) f[s] -= f[s ^ bit];
    }
  }
}

}  // namespace parallel

}  // namespace prodsys::kernels
