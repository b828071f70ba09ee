#pragma once

// Exact model of the hyperspace K([0,1]) on finite unions of closed rational
// intervals. Degenerate intervals [a,a] are points. Every operation is exact
// rational arithmetic.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prodsys/rational.hpp"

namespace prodsys::hyperspace {

/// Closed interval [lo, hi] of [0,1].
struct Interval {
  Rational lo;
  Rational hi;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Throws RangeError unless 0 <= lo <= hi <= 1.
Interval make_interval(Rational lo, Rational hi);

class ClosedSet {
 public:
  ClosedSet() = default;

  /// Sorts and merges touching or overlapping intervals. Throws RangeError for
  /// endpoints outside [0,1] or lo > hi.
  static ClosedSet normalize(std::vector<Interval> raw);
  static ClosedSet point(const Rational& x);
  static ClosedSet points(const std::vector<Rational>& xs);

  /// Canonical text: "a/b..c/d; e/f..g/h"; the empty set is "".
  static ClosedSet parse(std::string_view text);
  std::string to_text() const;

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  bool contains(const Rational& x) const;
  /// True when every interval is degenerate (finitely many points).
  bool is_finite() const;

  friend bool operator==(const ClosedSet&, const ClosedSet&) = default;
  friend bool operator<(const ClosedSet& a, const ClosedSet& b);

 private:
  std::vector<Interval> intervals_;
};

/// z inside w.
bool is_subset(const ClosedSet& z, const ClosedSet& w);
ClosedSet set_union(const ClosedSet& a, const ClosedSet& b);

/// dist(x, z); z must be nonempty (InvalidInput).
Rational distance(const Rational& x, const ClosedSet& z);
/// sup_{x in a} dist(x, b); both nonempty.
Rational directed_hausdorff(const ClosedSet& a, const ClosedSet& b);
/// Hausdorff distance with d(empty, empty) = 0 and d(Z, empty) = 1 otherwise.
Rational hausdorff(const ClosedSet& a, const ClosedSet& b);

bool hits(const ClosedSet& z, const Interval& q);
inline bool misses(const ClosedSet& z, const Interval& q) { return !hits(z, q); }

/// Accumulation points: the union of the non-degenerate intervals.
ClosedSet cb_derivative(const ClosedSet& z);

/// Topological boundary relative to [0,1].
ClosedSet boundary(const ClosedSet& z);

struct Count {
  bool infinite = false;
  std::size_t value = 0;

  friend bool operator==(const Count&, const Count&) = default;
};

/// |z intersected with q|.
Count count_in(const ClosedSet& z, const Interval& q);

/// Membership of z in the four sets
///   D^-1(M_F) u H_dF,  {#(Z n F) < inf} u H_dF,
///   {#(Z n Int F) < inf} u H_dF,  D^-1(M_Int F) u H_dF
/// where Int and d are taken relative to [0,1].
struct BoundaryLemmaSides {
  bool derivative_misses_f = false;
  bool finite_in_f = false;
  bool finite_in_interior = false;
  bool derivative_misses_interior = false;

  bool agree() const {
    return derivative_misses_f == finite_in_f && finite_in_f == finite_in_interior &&
           finite_in_interior == derivative_misses_interior;
  }
};

/// Throws InvalidInput when f has empty interior.
BoundaryLemmaSides boundary_lemma_sides(const ClosedSet& z, const ClosedSet& f);
bool boundary_lemma_check(const ClosedSet& z, const ClosedSet& f);

/// A finite set within Hausdorff distance 2^-k of z.
ClosedSet finite_approximation(const ClosedSet& z, unsigned k);

/// Finitely supported law on ClosedSet values.
class RandomClosedSetDist {
 public:
  using Atom = std::pair<ClosedSet, Rational>;

  RandomClosedSetDist() = default;

  /// Merges equal sets, drops zero weights and sorts atoms. Throws InvalidInput
  /// on a negative weight or when the total is not 1 (exactly when `exact`,
  /// within 1e-10 otherwise).
  static RandomClosedSetDist from_atoms(std::vector<Atom> atoms, bool exact = true);
  static RandomClosedSetDist dirac(ClosedSet z);

  const std::vector<Atom>& atoms() const { return atoms_; }
  /// False when probabilities were rounded from floating point.
  bool exact() const { return exact_; }
  /// Probability of z (0 when z is not an atom).
  Rational prob(const ClosedSet& z) const;

  friend bool operator==(const RandomClosedSetDist& a, const RandomClosedSetDist& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<Atom> atoms_;
  bool exact_ = true;
};

}  // namespace prodsys::hyperspace
