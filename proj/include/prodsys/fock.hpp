#pragma once

// Closed-form computations on symmetric Fock spaces over L^2([0,T); C^d).
// Times are exact rationals; only the final exponentials are floating point.
// Inner products are conjugate-linear in the first argument.

#include <cstddef>
#include <vector>

#include "prodsys/linalg.hpp"
#include "prodsys/rational.hpp"

namespace prodsys::fock {

using linalg::Complex;
using linalg::ComplexVector;

struct Piece {
  Rational begin;
  Rational end;
  ComplexVector value;
};

/// Right-continuous step function [0, horizon) -> C^d; zero off the pieces.
class StepFunction {
 public:
  /// Throws InvalidInput unless pieces are nonempty half-open intervals,
  /// sorted, disjoint, inside [0, horizon) and of dimension `dim`.
  StepFunction(std::size_t dim, Rational horizon, std::vector<Piece> pieces);

  static StepFunction zero(std::size_t dim, Rational horizon);
  static StepFunction constant(const ComplexVector& value, Rational horizon);
  /// value on [begin, end), zero elsewhere.
  static StepFunction indicator(const ComplexVector& value, Rational begin, Rational end,
                                Rational horizon);

  std::size_t dim() const { return dim_; }
  const Rational& horizon() const { return horizon_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Value at s; throws RangeError outside [0, horizon).
  ComplexVector at(const Rational& s) const;
  /// Restriction to [begin, end) translated to [0, end - begin).
  StepFunction restrict_to(const Rational& begin, const Rational& end) const;
  /// Sorted distinct breakpoints, including 0 and the horizon.
  std::vector<Rational> breakpoints() const;

 private:
  std::size_t dim_;
  Rational horizon_;
  std::vector<Piece> pieces_;
};

/// <f, g> in L^2; exact overlap lengths, floating-point values.
Complex l2_inner(const StepFunction& f, const StepFunction& g);
StepFunction operator+(const StepFunction& f, const StepFunction& g);

/// <eps(f), eps(g)> = exp(<f, g>).
Complex exp_inner(const StepFunction& f, const StepFunction& g);

/// <chi^c_t, chi^d_t> = t <c, d>; throws RangeError for t <= 0.
Complex root_inner(const ComplexVector& c, const ComplexVector& d, double t);

struct EulerComparison {
  Complex product;  // prod_i (1 + 2^-n t <d_{i-1}, c>)^(k_i - k_{i-1})
  Complex limit;    // prod_i exp((s_i - s_{i-1}) <d_{i-1}, c>)
  double gap = 0.0;
};

/// Throws GridError when a breakpoint of g is off the 2^-n t grid and
/// InvalidInput when the horizon of g is not t.
EulerComparison euler_product(const StepFunction& g, const ComplexVector& c, const Rational& t,
                              unsigned n);

/// e^{t|c|^2} - (1 + 2^-n t |c|^2)^{2^n}
double euler_norm_defect(const ComplexVector& c, double t, unsigned n);

/// g(s_1) (x) ... (x) g(s_k); the scalar 1 for the empty set. `points` must be
/// strictly increasing (InvalidInput) and inside [0, horizon) (RangeError).
ComplexVector guichardet_eval(const StepFunction& g, const std::vector<Rational>& points);

struct WeylAction {
  Complex phase;  // exp(-i Im <h, k>)
  StepFunction shifted;
};

/// W(h) applied to the normalised exponential vector of k.
WeylAction weyl_on_coherent(const StepFunction& h, const StepFunction& k);

/// The Fock unit (e^{lambda t} eps(c 1_[0,t)))_t.
struct UnitLabel {
  Complex drift;
  ComplexVector direction;
};

/// Label of the lattice unit v^{(x)n} relative to the reference unit u:
/// v = e^lambda (u + x) with x orthogonal to u, direction = coordinates of x
/// in the orthonormal basis of u^perp. Throws InvalidUnit when <u, v> = 0.
UnitLabel label_of_slot_unit(const ComplexVector& u, const ComplexVector& v);

/// conj(lambda_u) + lambda_v + <c_u, c_v>
Complex covariance(const UnitLabel& u, const UnitLabel& v);

/// Rank of the covariance form restricted to zero-sum functions on `units`.
/// Throws InvalidInput for an empty list or mixed direction dimensions.
std::size_t index_from_units(const std::vector<UnitLabel>& units);

}  // namespace prodsys::fock
