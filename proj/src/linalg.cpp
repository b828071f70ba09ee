#include "prodsys/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "prodsys/errors.hpp"
#include "prodsys/kernels.hpp"

namespace prodsys::linalg {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionError(std::string(op) + ": ambient dimensions " +
                         std::to_string(a.ambient_dim()) + " and " +
                         std::to_string(b.ambient_dim()) + " differ");
  }
}

Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

// Column space of m keeping singular values above `cutoff` (absolute).
// Orthonormal basis of the directions of m whose column-pivoted QR pivots
// exceed `cutoff`. Eigen's divide-and-conquer SVD loses accuracy on complex
// inputs of a few hundred columns, so the large joins go through QR.
ComplexMatrix range_above(const ComplexMatrix& m, double cutoff) {
  if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m);
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  Eigen::Index r = 0;
  while (r < diag.size() && diag(r) > cutoff) ++r;
  return qr.householderQ() * ComplexMatrix::Identity(m.rows(), r);
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

double orthonormality_defect(const ComplexMatrix& basis) {
  if (basis.cols() == 0) return 0.0;
  const ComplexMatrix gram = basis.adjoint() * basis;
  return (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Subspace Subspace::from_orthonormal(ComplexMatrix basis) {
  if (!all_finite(basis)) throw InvalidInput("basis has non-finite entries");
  if (basis.cols() > basis.rows()) throw InvalidInput("more basis vectors than ambient dimension");
  if (orthonormality_defect(basis) > 1e-10) throw InvalidInput("basis columns are not orthonormal");
  return Subspace(std::move(basis));
}

Subspace Subspace::zero(std::size_t ambient_dim) {
  return Subspace(ComplexMatrix(static_cast<Eigen::Index>(ambient_dim), 0));
}

Subspace Subspace::full(std::size_t ambient_dim) {
  const auto d = static_cast<Eigen::Index>(ambient_dim);
  return Subspace(ComplexMatrix::Identity(d, d));
}

Subspace Subspace::line(const ComplexVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidInput("line through a zero or non-finite vector");
  return Subspace(ComplexMatrix(v / norm));
}

ComplexVector Subspace::project(const ComplexVector& v) const {
  if (static_cast<std::size_t>(v.size()) != ambient_dim()) throw DimensionError("project: vector size mismatch");
  if (is_zero()) return ComplexVector::Zero(v.size());
  return basis_ * (basis_.adjoint() * v);
}

Subspace orthonormalize(const ComplexMatrix& vectors, double tol) {
  if (!(tol >= 0.0)) throw InvalidInput("orthonormalize: tolerance must be nonnegative");
  if (!all_finite(vectors)) throw InvalidInput("orthonormalize: non-finite entries");
  if (vectors.cols() == 0) return Subspace::zero(static_cast<std::size_t>(vectors.rows()));
  const double scale = vectors.cwiseAbs().maxCoeff();
  if (scale == 0.0) return Subspace::zero(static_cast<std::size_t>(vectors.rows()));
  Eigen::JacobiSVD<ComplexMatrix> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return Subspace::unchecked(svd.matrixU().leftCols(r));
}

std::size_t numerical_rank(const ComplexMatrix& m, double tol) {
  const auto sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++r;
  }
  return r;
}

Subspace join(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "join");
  if (a.is_full() || b.is_zero()) return a;
  if (b.is_full() || a.is_zero()) return b;
  // Both bases are orthonormal, so the concatenation has unit scale and the
  // new directions are the residual of b against a (projected out twice).
  const ComplexMatrix& qa = a.basis();
  ComplexMatrix residual = b.basis() - qa * (qa.adjoint() * b.basis());
  residual -= qa * (qa.adjoint() * residual);
  ComplexMatrix extra = range_above(residual, kRankTol);
  if (extra.cols() == 0) return a;
  extra -= qa * (qa.adjoint() * extra);
  ComplexMatrix basis(qa.rows(), qa.cols() + extra.cols());
  basis << qa, extra;
  if (orthonormality_defect(basis) > 1e-12) {
    Eigen::HouseholderQR<ComplexMatrix> qr(basis);
    basis = qr.householderQ() * ComplexMatrix::Identity(basis.rows(), basis.cols());
  }
  return Subspace::unchecked(std::move(basis));
}

Subspace join(const std::vector<Subspace>& parts, std::size_t ambient_dim) {
  Subspace acc = Subspace::zero(ambient_dim);
  for (const auto& p : parts) {
    acc = join(acc, p);
    if (acc.is_full()) break;
  }
  return acc;
}

Subspace complement(const Subspace& a) {
  const auto d = static_cast<Eigen::Index>(a.ambient_dim());
  if (a.is_zero()) return Subspace::full(a.ambient_dim());
  if (a.is_full()) return Subspace::zero(a.ambient_dim());
  Eigen::HouseholderQR<ComplexMatrix> qr(a.basis());
  const auto r = static_cast<Eigen::Index>(a.rank());
  ComplexMatrix tail = ComplexMatrix::Zero(d, d - r);
  tail.bottomRows(d - r).setIdentity();
  return Subspace::unchecked(qr.householderQ() * tail);
}

Subspace tensor(const Subspace& a, const Subspace& b) {
  return Subspace::unchecked(kron(a.basis(), b.basis()));
}

Subspace tensor_power(const Subspace& a, std::size_t n) {
  Subspace acc = Subspace::full(1);
  for (std::size_t i = 0; i < n; ++i) acc = tensor(acc, a);
  return acc;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "intersect");
  return complement(join(complement(a), complement(b)));
}

Subspace difference(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "difference");
  if (!contains(a, b)) throw InvalidInput("difference: subtrahend is not contained in the minuend");
  if (b.is_zero()) return a;
  const ComplexMatrix& qb = b.basis();
  ComplexMatrix residual = a.basis() - qb * (qb.adjoint() * a.basis());
  residual -= qb * (qb.adjoint() * residual);
  return Subspace::unchecked(range_above(residual, kRankTol));
}

ComplexMatrix projector(const Subspace& a) {
  const auto d = static_cast<Eigen::Index>(a.ambient_dim());
  if (a.is_zero()) return ComplexMatrix::Zero(d, d);
  return a.basis() * a.basis().adjoint();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  const ComplexMatrix gram = m.cols() <= m.rows() ? ComplexMatrix(m.adjoint() * m)
                                                  : ComplexMatrix(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double hermitian_norm(const ComplexMatrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double containment_defect(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "contains");
  if (b.is_zero()) return 0.0;
  if (a.is_zero()) return operator_norm(b.basis());
  const ComplexMatrix& qa = a.basis();
  return operator_norm(b.basis() - qa * (qa.adjoint() * b.basis()));
}

bool contains(const Subspace& a, const Subspace& b, double tol) {
  return containment_defect(a, b) < tol;
}

double projector_distance(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "projector_distance");
  if (a.rank() != b.rank()) return 1.0;
  return std::min(1.0, containment_defect(a, b));
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol) {
  return projector_distance(a, b) < tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kernels::parallel::kron(a, b);
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Complex integer_power(Complex z, std::uint64_t n) {
  const auto nd = static_cast<double>(n);
  if (z.imag() == 0.0 && z.real() > 0.0) return {std::pow(z.real(), nd), 0.0};
  if (z == Complex(0.0, 0.0)) return n == 0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  return std::polar(std::pow(std::abs(z), nd), nd * std::arg(z));
}

}  // namespace prodsys::linalg
