#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace prodsys::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kRankTol = 1e-10;
inline constexpr double kContainTol = 1e-8;
inline constexpr double kSubspaceEqualTol = 1e-8;

/// A linear subspace of C^ambient_dim, stored as an orthonormal basis
/// (ambient_dim x rank). Immutable once built.
class Subspace {
 public:
  Subspace() = default;

  /// Adopts `basis` as-is; the columns must already be orthonormal.
  /// Throws InvalidInput when they are not (Gram deviation > 1e-10).
  static Subspace from_orthonormal(ComplexMatrix basis);

  static Subspace zero(std::size_t ambient_dim);
  static Subspace full(std::size_t ambient_dim);
  /// Span of a single nonzero vector.
  static Subspace line(const ComplexVector& v);

  std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
  std::size_t rank() const { return static_cast<std::size_t>(basis_.cols()); }
  bool is_zero() const { return basis_.cols() == 0; }
  bool is_full() const { return basis_.cols() == basis_.rows(); }
  const ComplexMatrix& basis() const { return basis_; }

  /// Orthogonal projection of v onto this subspace.
  ComplexVector project(const ComplexVector& v) const;

  /// Skips the orthonormality check; for bases orthonormal by construction
  /// (Kronecker products of orthonormal bases, SVD factors).
  static Subspace unchecked(ComplexMatrix basis) { return Subspace(std::move(basis)); }

 private:
  explicit Subspace(ComplexMatrix basis) : basis_(std::move(basis)) {}

  ComplexMatrix basis_;
};

/// Column space of `vectors`; singular values below tol * sigma_max are dropped.
/// Throws InvalidInput on non-finite entries or negative tol.
Subspace orthonormalize(const ComplexMatrix& vectors, double tol = kRankTol);

/// Numerical rank under the same relative singular-value rule.
std::size_t numerical_rank(const ComplexMatrix& m, double tol = kRankTol);

Subspace join(const Subspace& a, const Subspace& b);
Subspace join(const std::vector<Subspace>& parts, std::size_t ambient_dim);
Subspace complement(const Subspace& a);
Subspace tensor(const Subspace& a, const Subspace& b);
/// a^{(x)n}; n = 0 yields the one-dimensional space C.
Subspace tensor_power(const Subspace& a, std::size_t n);
Subspace intersect(const Subspace& a, const Subspace& b);
/// a (-) b : the orthocomplement of b inside a. Requires b inside a.
Subspace difference(const Subspace& a, const Subspace& b);

ComplexMatrix projector(const Subspace& a);
bool contains(const Subspace& a, const Subspace& b, double tol = kContainTol);
/// Largest singular value of (I - P_a) * basis(b).
double containment_defect(const Subspace& a, const Subspace& b);

/// Operator-norm distance of the two projectors. Equal ranks use the largest
/// principal-angle sine; unequal ranks are at distance 1.
double projector_distance(const Subspace& a, const Subspace& b);
bool same_subspace(const Subspace& a, const Subspace& b, double tol = kSubspaceEqualTol);

/// Kronecker product with the left factor as the most significant index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// sigma_max(m), via the smaller of the two Gram matrices.
double operator_norm(const ComplexMatrix& m);
/// max |lambda| of a Hermitian matrix.
double hermitian_norm(const ComplexMatrix& h);
/// max |(a^dagger a - I)_{ij}|
double orthonormality_defect(const ComplexMatrix& basis);

bool all_finite(const ComplexMatrix& m);

/// z^n; positive reals go through std::pow so repeated factors do not
/// accumulate rounding.
Complex integer_power(Complex z, std::uint64_t n);

}  // namespace prodsys::linalg
