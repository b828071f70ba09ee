#pragma once

#include <cstddef>

#include "prodsys/lattice.hpp"
#include "prodsys/linalg.hpp"

namespace prodsys::amalgam {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::Subspace;

/// Contractive map C^{g2} -> C^{g1}; acts on level n as C^{(x)n}.
class SlotMorphism {
 public:
  /// Throws NonContractiveMorphism when sigma_max(c) > 1 + 1e-12.
  explicit SlotMorphism(ComplexMatrix c);

  std::size_t source_dim() const { return static_cast<std::size_t>(c_.cols()); }
  std::size_t target_dim() const { return static_cast<std::size_t>(c_.rows()); }
  const ComplexMatrix& matrix() const { return c_; }

 private:
  ComplexMatrix c_;
};

/// Slot space A with isometries J1: C^{g1} -> A, J2: C^{g2} -> A such that
/// J1^dagger J2 = C and A = Ran J1 v Ran J2.
struct AmalgamResult {
  std::size_t slot_dim = 0;
  ComplexMatrix j1;
  ComplexMatrix j2;
  ComplexMatrix c;
};

struct AmalgamDefects {
  double isometry1 = 0.0;  // |J1^dagger J1 - I|
  double isometry2 = 0.0;
  double pairing = 0.0;    // |J1^dagger J2 - C|
  double generation = 0.0; // projector distance of Ran J1 v Ran J2 from A
};

/// GNS construction on the Gram [[I, C], [C^dagger, I]]. Throws
/// NonContractiveMorphism when the Gram has an eigenvalue below -1e-10.
AmalgamResult amalgamate(std::size_t g1, std::size_t g2, const SlotMorphism& c);
AmalgamDefects check_invariants(const AmalgamResult& res);

/// Level 1 is span{x (x) u2} v span{u1 (x) y} inside C^{g1} (x) C^{g2}.
/// Throws InvalidUnit unless both units are normalised.
lattice::Subsystem spatial_product_in_tensor(const ComplexVector& u1, const ComplexVector& u2,
                                             std::size_t depth);

struct AmalgamRoots {
  Subspace solver_route;   // constraint solver on the amalgam system at u = J2 u2
  Subspace formula_route;  // J1 (u1^perp) v J2 (u2^perp), u1 = C u2
  ComplexVector unit;
  double defect = 0.0;
};

/// Throws PartialIsometryPrecondition unless C^dagger C u2 = u2 and
/// C C^dagger C = C within 1e-10; VerificationFailure when the two routes
/// disagree beyond 1e-8.
AmalgamRoots root_space_of_amalgam(const AmalgamResult& res, const ComplexVector& u2,
                                   std::size_t depth);

/// Normalised squared distance of (v(c) (x) w(d))^{(x)n}, v(c) = (1, sqrt(T/n) c),
/// from level n of the spatial product of the two vacuum-pointed toy systems.
double spatial_tensor_defect(const ComplexVector& c, const ComplexVector& d, double horizon,
                             std::size_t n_slots);

}  // namespace prodsys::amalgam
