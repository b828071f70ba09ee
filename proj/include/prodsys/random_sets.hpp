#pragma once

// Random closed sets from projection families on n lattice cells. Cell i is
// slot i of (C^g)^{(x)n}; P_{r,t} projects slots r..t-1 onto the slot
// subspace of a product subsystem and acts as the identity elsewhere.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "prodsys/check.hpp"
#include "prodsys/hyperspace.hpp"
#include "prodsys/lattice.hpp"
#include "prodsys/linalg.hpp"
#include "prodsys/rational.hpp"

namespace prodsys::random_sets {

using linalg::ComplexMatrix;
using linalg::ComplexVector;

inline constexpr std::size_t kMaxCells = 12;
/// Largest g^n for which n-cell operators are materialised as matrices.
inline constexpr std::size_t kMaxDenseDim = 1024;

/// Bit i of a cell mask stands for cell i.
using CellMask = std::uint32_t;
using Event = std::function<bool(CellMask excited)>;

class ProjectionFamily {
 public:
  /// Throws InvalidInput unless `slot_projector` is an orthogonal projection
  /// (within 1e-10), NonzeroProjectionViolation when it is zero and RangeError
  /// unless 1 <= cells <= kMaxCells.
  ProjectionFamily(ComplexMatrix slot_projector, std::size_t cells);

  std::size_t cells() const { return cells_; }
  std::size_t slot_dim() const { return static_cast<std::size_t>(slot_projector_.rows()); }
  /// g^n
  std::size_t dim() const;
  const ComplexMatrix& slot_projector() const { return slot_projector_; }

  /// Unitary V with P = V diag(1..1, 0..0) V^dagger, and the slot rank.
  const ComplexMatrix& eigenbasis() const { return eigenbasis_; }
  std::size_t slot_rank() const { return slot_rank_; }

  /// I^{(x)r} (x) P^{(x)(t-r)} (x) I^{(x)(n-t)}; RangeError unless
  /// 0 <= r < t <= n, CapacityError when dim() > kMaxDenseDim.
  ComplexMatrix block(std::size_t r, std::size_t t) const;
  ComplexMatrix cell(std::size_t i) const { return block(i, i + 1); }

  /// max over r < s < t of |P_{r,s} P_{s,t} - P_{r,t}|
  double evolution_defect() const;
  /// max over r < t of |P_{r,t} - I (x) M (x) I| with M the compressed middle block.
  double biadaptedness_defect() const;

 private:
  ComplexMatrix slot_projector_;
  ComplexMatrix eigenbasis_;
  std::size_t slot_rank_ = 0;
  std::size_t cells_;
};

/// Throws NonzeroProjectionViolation when the subsystem has a zero level.
ProjectionFamily projections_from_subsystem(const lattice::Subsystem& f, std::size_t cells);

class StateDensity {
 public:
  /// Throws InvalidInput unless rho is Hermitian within 1e-12, has trace 1
  /// within 1e-12 and no eigenvalue below -1e-12.
  static StateDensity from_matrix(ComplexMatrix rho);
  /// I / dim
  static StateDensity tracial(std::size_t dim);
  /// diag(weights); exact. Throws InvalidInput unless the weights are
  /// nonnegative and sum to 1.
  static StateDensity rational_diagonal(std::vector<Rational> weights);
  /// diag(1, 2, 4, ...) / (2^dim - 1)
  static StateDensity geometric_diagonal(std::size_t dim);
  /// diag of integer weights drawn from 1..64, normalised.
  static StateDensity random_faithful_diagonal(std::size_t dim, std::mt19937_64& rng);
  /// |psi><psi| / |psi|^2
  static StateDensity pure(const ComplexVector& psi);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const ComplexMatrix& matrix() const { return rho_; }
  /// Smallest eigenvalue is positive.
  bool faithful() const { return faithful_; }
  bool tracial() const { return tracial_; }
  /// Exact diagonal when the state was built from rationals.
  const std::optional<std::vector<Rational>>& exact_diagonal() const { return diagonal_; }

 private:
  StateDensity() = default;

  ComplexMatrix rho_;
  bool faithful_ = false;
  bool tracial_ = false;
  std::optional<std::vector<Rational>> diagonal_;
};

/// How an excited cell i of n becomes part of a closed subset of [0,1].
enum class AtomRendering { Points, Cells };

hyperspace::ClosedSet render_atom(CellMask excited, std::size_t cells,
                                  AtomRendering rendering = AtomRendering::Points);

struct Measure {
  hyperspace::RandomClosedSetDist dist;
  /// p(T) indexed by excited-cell mask.
  std::vector<Rational> by_mask;
  /// q(A) = tr(rho prod_{i in A} P_i) indexed by cell mask.
  std::vector<double> miss;
  /// Set for non-faithful states: equivalence claims do not apply.
  bool non_faithful_warning = false;
};

/// q(A) for every cell mask, then p(T) = sum_{C subset T} (-1)^{|T\C|} q(C^c).
/// Exact when rho is tracial, or rationally diagonal with a diagonal 0/1 slot
/// projector. Probabilities in [-1e-12, 0) are clamped to 0; lower values
/// throw InconsistentFamily.
Measure measure_from_state(const ProjectionFamily& p, const StateDensity& rho,
                           AtomRendering rendering = AtomRendering::Points);

/// Image of the law under the Cantor-Bendixson derivative.
hyperspace::RandomClosedSetDist pushforward_cb(const hyperspace::RandomClosedSetDist& dist);

/// sum over masks T with event(T) of prod_{i in T} (I - P_i) prod_{i not in T} P_i
ComplexMatrix indicator_projection(const ProjectionFamily& p, const Event& event);

struct DerivativeReport {
  std::vector<CheckResult> checks;
  Measure measure;
  Measure cluster_measure;

  bool pass() const { return all_pass(checks); }
};

/// Compares, for every block [s,t) of the n cells,
///  (1) the event |T n [s,t)| <= 1 with I (x) P(F^-+_{t-s}) (x) I,
///  (2) the event "T n [s,t) finite" with the cluster family block P_{s,t},
///  (3) the derivative pushforward of the measure with the cluster measure.
/// Tolerance 1e-10. CapacityError when g^n > kMaxDenseDim.
DerivativeReport verify_derivative_correspondence(const lattice::Subsystem& f,
                                                  const StateDensity& rho, std::size_t cells);

/// The two laws have the same null atoms. Throws PreconditionError unless
/// both states are faithful.
bool state_equivalence_check(const ProjectionFamily& p, const StateDensity& rho1,
                             const StateDensity& rho2);

}  // namespace prodsys::random_sets
