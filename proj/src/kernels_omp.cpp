#include <cstdint>

#include "prodsys/kernels.hpp"

namespace prodsys::kernels::parallel {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  const std::int64_t cols = a.cols();
  const std::int64_t rows = a.rows();
#pragma omp parallel for collapse(2) schedule(static)
  for (std::int64_t j = 0; j < cols; ++j) {
    for (std::int64_t i = 0; i < rows; ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd apply_slot(const Eigen::MatrixXcd& state, const Eigen::MatrixXcd& op,
                            std::size_t g, std::size_t n, std::size_t slot) {
  const auto lo = static_cast<Eigen::Index>(ipow(g, n - slot - 1));
  const auto hi = static_cast<std::int64_t>(ipow(g, slot));
  const auto gi = static_cast<Eigen::Index>(g);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(state.rows(), state.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t h = 0; h < hi; ++h) {
    for (Eigen::Index dp = 0; dp < gi; ++dp) {
      for (Eigen::Index d = 0; d < gi; ++d) {
        const auto coeff = op(dp, d);
        if (coeff == 0.0) continue;
        out.middleRows((h * gi + dp) * lo, lo) += coeff * state.middleRows((h * gi + d) * lo, lo);
      }
    }
  }
  return out;
}

std::vector<double> miss_probabilities(const Eigen::MatrixXcd& rho,
                                       const Eigen::MatrixXcd& slot_projector, std::size_t g,
                                       std::size_t n) {
  const auto masks = static_cast<std::int64_t>(std::size_t{1} << n);
  std::vector<double> q(static_cast<std::size_t>(masks));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t a = 0; a < masks; ++a) {
    Eigen::MatrixXcd m = rho;
    for (std::size_t i = 0; i < n; ++i) {
      if (a & (std::int64_t{1} << i)) m = serial::apply_slot(m, slot_projector, g, n, i);
    }
    q[static_cast<std::size_t>(a)] = m.trace().real();
  }
  return q;
}

}  // namespace prodsys::kernels::parallel
