#pragma once

// Cluster construction on the lattice. For a product subsystem F of the full
// system E (levels G^{(x)n}):
//   F^-_n  = join_{0<r<n} (E_r - F_r) (x) (E_{n-r} - F_{n-r})
//   F^-+_n = E_n - F^-_n
// and the cluster is the product system generated by the inclusion system F^-+.

#include <cstddef>
#include <vector>

#include "prodsys/check.hpp"
#include "prodsys/lattice.hpp"

namespace prodsys::cluster {

using linalg::ComplexVector;
using linalg::Subspace;
using lattice::InclusionSystem;
using lattice::Subsystem;

/// F^-_n for n = 1..depth (index n-1); level 1 is the zero subspace.
std::vector<Subspace> ominus_levels(const Subsystem& f, std::size_t depth);

struct ClusterReport {
  std::vector<Subspace> ominus;          // F^-_n
  InclusionSystem inclusion;             // F^-+_n
  std::vector<std::size_t> ominus_dims;
  std::vector<std::size_t> inclusion_dims;
  std::vector<CheckResult> checks;       // containments and compatibility
};

/// Builds F^-+ and evaluates: F_n inside F^-+_n, inclusion compatibility, and
/// the two-sided containments F^-+_s (x) F_t, F_s (x) F^-+_t inside F^-+_{s+t}
/// together with their (-) F refinements.
ClusterReport cluster_report(const Subsystem& f, std::size_t depth);

/// F^-+ as an inclusion system. Throws VerificationFailure if any check of
/// cluster_report fails.
InclusionSystem cluster_inclusion(const Subsystem& f, std::size_t depth);

/// The product system generated by cluster_inclusion(f, depth).
Subsystem cluster_system(const Subsystem& f, std::size_t depth);

/// (F1, F2)^-+_n = E_n - join_{0<r<n} (E_r - F1_r) (x) (E_{n-r} - F2_{n-r}).
/// Throws InvalidInclusionSystem when an input is not inclusion compatible and
/// DimensionError when the slots differ.
InclusionSystem pair_cluster(const InclusionSystem& f1, const InclusionSystem& f2,
                             std::size_t depth);

/// X_n = (C u)^-+_n (-) C u^{(x)n}.
Subspace x_space(const ComplexVector& u, std::size_t n);
/// X_1..X_depth (index n-1).
std::vector<Subspace> x_spaces(const ComplexVector& u, std::size_t depth);

/// X_{m+n} = X_m (x) u^n  (+)  u^m (x) X_n, with orthogonal summands.
CheckResult x_decomposition_check(const ComplexVector& u, std::size_t m, std::size_t n);
/// Same, reusing precomputed X spaces (at least m + n of them).
CheckResult x_decomposition_check(const std::vector<Subspace>& xs, const ComplexVector& u, std::size_t m,
                                  std::size_t n);

/// <u^m (x) z (x) u^p, x (x) u^q> = 0 for z in X_s, x in X_m, all paddings
/// with total level <= depth.
CheckResult shift_orthogonality_check(const ComplexVector& u, std::size_t m, std::size_t depth);
/// Same with depth = xs.size().
CheckResult shift_orthogonality_check(const std::vector<Subspace>& xs, const ComplexVector& u, std::size_t m);

}  // namespace prodsys::cluster
