#include "prodsys/kernels.hpp"

namespace prodsys::kernels {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

namespace serial {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd apply_slot(const Eigen::MatrixXcd& state, const Eigen::MatrixXcd& op,
                            std::size_t g, std::size_t n, std::size_t slot) {
  const std::size_t lo = ipow(g, n - slot - 1);
  const std::size_t hi = ipow(g, slot);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(state.rows(), state.cols());
  for (std::size_t h = 0; h < hi; ++h) {
    for (std::size_t dp = 0; dp < g; ++dp) {
      for (std::size_t d = 0; d < g; ++d) {
        const auto coeff = op(static_cast<Eigen::Index>(dp), static_cast<Eigen::Index>(d));
        if (coeff == 0.0) continue;
        const auto dst = static_cast<Eigen::Index>((h * g + dp) * lo);
        const auto src = static_cast<Eigen::Index>((h * g + d) * lo);
        out.middleRows(dst, static_cast<Eigen::Index>(lo)) +=
            coeff * state.middleRows(src, static_cast<Eigen::Index>(lo));
      }
    }
  }
  return out;
}

std::vector<double> miss_probabilities(const Eigen::MatrixXcd& rho,
                                       const Eigen::MatrixXcd& slot_projector, std::size_t g,
                                       std::size_t n) {
  const std::size_t masks = std::size_t{1} << n;
  std::vector<double> q(masks);
  for (std::size_t a = 0; a < masks; ++a) {
    Eigen::MatrixXcd m = rho;
    for (std::size_t i = 0; i < n; ++i) {
      if (a & (std::size_t{1} << i)) m = apply_slot(m, slot_projector, g, n, i);
    }
    q[a] = m.trace().real();
  }
  return q;
}

}  // namespace serial
}  // namespace prodsys::kernels
