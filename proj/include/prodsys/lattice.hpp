#pragma once

// Product systems over the integer time lattice. The fiber at level n is the
// tensor power G^{(x)n} of a slot space G = C^g, with slot 0 the most
// significant index; the structure identifications G^{(x)m} (x) G^{(x)n} =
// G^{(x)(m+n)} are literal index regroupings.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "prodsys/linalg.hpp"

namespace prodsys::lattice {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::Subspace;

inline constexpr std::size_t kDefaultDepth = 6;
/// Largest fiber dimension that is ever materialized as a dense basis.
inline constexpr std::size_t kMaxFiberDim = 4096;

/// Slot space C^g with a distinguished normalised reference unit.
class ProductSystem {
 public:
  /// Throws InvalidUnit unless |u| = 1 within 1e-12.
  explicit ProductSystem(ComplexVector reference_unit);

  std::size_t slot_dim() const { return static_cast<std::size_t>(unit_.size()); }
  const ComplexVector& reference_unit() const { return unit_; }

 private:
  ComplexVector unit_;
};

/// v^{(x)n}. Throws InvalidUnit for v = 0.
ComplexVector unit_section(const ComplexVector& v, std::size_t n);

/// a_n = sum_j u^{(x)(j-1)} (x) a1 (x) u^{(x)(n-j)}.
ComplexVector addit_section(const ComplexVector& u, const ComplexVector& a1, std::size_t n);

struct AdditDecomposition {
  Complex trivial_coeff;    // <u, a1>
  ComplexVector root_part;  // a1 - <u, a1> u
};

AdditDecomposition addit_decompose(const ComplexVector& u, const ComplexVector& a1);

/// <a_n, b_n> from the seeds alone: n^2 conj(la) lb + n <a_root, b_root>.
Complex addit_inner(const ComplexVector& u, const ComplexVector& a1, const ComplexVector& b1,
                    std::size_t n);

/// Product subsystem: levels[n] = level1^{(x)n} for 1 <= n <= depth.
class Subsystem {
 public:
  Subsystem(Subspace level1, std::size_t depth);

  static Subsystem full(std::size_t slot_dim, std::size_t depth = kDefaultDepth);
  /// The one-dimensional subsystem C u.
  static Subsystem unit_line(const ComplexVector& u, std::size_t depth = kDefaultDepth);

  std::size_t slot_dim() const { return level1_.ambient_dim(); }
  std::size_t depth() const { return depth_; }
  const Subspace& level1() const { return level1_; }
  const ComplexMatrix& slot_projector() const { return slot_projector_; }

  /// Dense basis of level n (n <= depth). Throws CapacityError beyond kMaxFiberDim.
  Subspace level(std::size_t n) const;
  /// P_{levels[n]} v, applied slot by slot without forming the level basis.
  ComplexVector project(std::size_t n, const ComplexVector& v) const;
  /// max over m+n <= depth of the projector distance between levels[m+n]
  /// and levels[m] (x) levels[n]; zero up to rounding by construction.
  double product_defect() const;

  Subsystem with_depth(std::size_t depth) const { return Subsystem(level1_, depth); }

 private:
  Subspace level1_;
  std::size_t depth_;
  ComplexMatrix slot_projector_;
};

/// Per-level subspaces with levels[m+n] inside levels[m] (x) levels[n].
class InclusionSystem {
 public:
  /// levels[k] is level k+1. Throws DimensionError on ambient mismatch.
  InclusionSystem(std::size_t slot_dim, std::vector<Subspace> levels);

  static InclusionSystem from_subsystem(const Subsystem& s);

  std::size_t slot_dim() const { return slot_dim_; }
  std::size_t depth() const { return levels_.size(); }
  const Subspace& level(std::size_t n) const;
  const std::vector<Subspace>& levels() const { return levels_; }

  /// max containment defect of levels[m+n] in levels[m] (x) levels[n].
  double compatibility_defect() const;
  bool is_compatible() const { return compatibility_defect() < linalg::kContainTol; }

 private:
  std::size_t slot_dim_;
  std::vector<Subspace> levels_;
};

/// Lattice Fock inclusion system: span{u^n} plus the single-excitation
/// vectors u..x..u, x orthogonal to u.
InclusionSystem fock_inclusion(const ComplexVector& u, std::size_t depth);

struct SeedSpace {
  Subspace seeds;  // a1 with addit_section(u, a1, n) in levels[n] for all n
  Subspace roots;  // seeds intersected with u^perp
};

using LevelProjector = std::function<ComplexVector(std::size_t n, const ComplexVector& v)>;

/// Stacks (I - P_n) a_n(a1) = 0 over n = 1..depth for a1 ranging over
/// `candidates` and returns the null space. Throws InvalidUnit unless
/// u^{(x)n} lies in every level.
SeedSpace solve_addit_seeds(const Subspace& candidates, const LevelProjector& project,
                            std::size_t depth, const ComplexVector& u);
SeedSpace solve_addit_seeds(const Subsystem& sub, const ComplexVector& u);
SeedSpace solve_addit_seeds(const InclusionSystem& inc, const ComplexVector& u);

struct GenerationReport {
  Subsystem system;
  /// Level n as the join over compositions of tensor products of input levels.
  std::vector<Subspace> joined_levels;
  /// max projector distance between the join route and level1^{(x)n}.
  double route_defect = 0.0;
};

/// Throws InvalidInclusionSystem when the input is not inclusion compatible.
GenerationReport generate_with_report(const InclusionSystem& inc);
Subsystem generate_product_system(const InclusionSystem& inc);

/// Index permutation of the tensor flip (first n-k slots)(x)(last k slots)
/// -> (last k)(x)(first n-k): perm[old] = new.
std::vector<std::size_t> flip_permutation(std::size_t g, std::size_t n, std::size_t k);
/// The same flip as a dense unitary permutation matrix. Throws RangeError for k > n.
ComplexMatrix flip_unitary(std::size_t g, std::size_t n, std::size_t k);

/// Ordered positive parts summing to `total`.
struct Composition {
  std::size_t total = 0;
  std::vector<std::size_t> parts;

  /// Throws InvalidInput on a zero part.
  static Composition make(std::vector<std::size_t> parts);
};

/// All 2^{n-1} compositions of n, ordered by their cut-point bitmask.
std::vector<Composition> compositions(std::size_t n);

/// Returns the slot-coordinate vector representing a section at time t, or
/// nullopt where the section is undefined.
using SlotEvaluator = std::function<std::optional<ComplexVector>(double t)>;

struct NetSpec {
  SlotEvaluator unit;
  SlotEvaluator other_unit;  // empty: pair the unit with itself
  SlotEvaluator addit;       // empty: unit net only
  double horizon = 1.0;
  unsigned depth = 10;
};

/// One row per refinement level j: the uniform composition of the horizon
/// into 2^j parts of length horizon / 2^j.
struct NetRow {
  unsigned level = 0;
  std::uint64_t parts = 0;
  double step = 0.0;
  Complex unit_inner;                  // prod_i <u_{t_i}, v_{t_i}>
  std::optional<double> addit_norm2;   // |a_t|^2 of the composed addit
  std::optional<Complex> unit_addit;   // <u_t, a_t>
};

/// Throws EvaluationError where an evaluator is undefined or sizes disagree,
/// RangeError for depth > 30 or a non-positive horizon.
std::vector<NetRow> composition_net_inner(const NetSpec& spec);

}  // namespace prodsys::lattice
