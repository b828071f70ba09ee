#include "prodsys/amalgam.hpp"

#include <cmath>
#include <string>

#include "prodsys/errors.hpp"

namespace prodsys::amalgam {

namespace {

void require_normalised(const ComplexVector& u, const char* what) {
  if (u.size() == 0 || std::abs(u.norm() - 1.0) > 1e-12) throw InvalidUnit(std::string(what) + " must have norm 1");
}

}  // namespace

SlotMorphism::SlotMorphism(ComplexMatrix c) : c_(std::move(c)) {
  if (!linalg::all_finite(c_)) throw InvalidInput("morphism has non-finite entries");
  const double norm = linalg::operator_norm(c_);
  if (norm > 1.0 + 1e-12) {
    throw NonContractiveMorphism("operator norm " + std::to_string(norm) + " exceeds 1");
  }
}

AmalgamResult amalgamate(std::size_t g1, std::size_t g2, const SlotMorphism& c) {
  if (c.target_dim() != g1 || c.source_dim() != g2) {
    throw DimensionError("morphism is " + std::to_string(c.target_dim()) + "x" + std::to_string(c.source_dim()) +
                         ", expected " + std::to_string(g1) + "x" + std::to_string(g2));
  }
  const auto n1 = static_cast<Eigen::Index>(g1);
  const auto n2 = static_cast<Eigen::Index>(g2);
  ComplexMatrix gram = ComplexMatrix::Identity(n1 + n2, n1 + n2);
  gram.topRightCorner(n1, n2) = c.matrix();
  gram.bottomLeftCorner(n2, n1) = c.matrix().adjoint();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  const auto& ev = es.eigenvalues();  // ascending
  if (ev(0) < -1e-10) {
    throw NonContractiveMorphism("twisted Gram has eigenvalue " + std::to_string(ev(0)));
  }
  const double cutoff = linalg::kRankTol * ev(ev.size() - 1);
  Eigen::Index first = 0;
  while (first < ev.size() && ev(first) <= cutoff) ++first;
  const Eigen::Index rank = ev.size() - first;

  // J = Lambda^{1/2} V^dagger restricted to the support of the Gram.
  const ComplexMatrix v = es.eigenvectors().rightCols(rank);
  const Eigen::VectorXd sqrt_ev = ev.tail(rank).cwiseSqrt();
  const ComplexMatrix j = sqrt_ev.cast<linalg::Complex>().asDiagonal() * v.adjoint();

  AmalgamResult res;
  res.slot_dim = static_cast<std::size_t>(rank);
  res.j1 = j.leftCols(n1);
  res.j2 = j.rightCols(n2);
  res.c = c.matrix();
  return res;
}

AmalgamDefects check_invariants(const AmalgamResult& res) {
  AmalgamDefects d;
  const auto id = [](Eigen::Index n) { return ComplexMatrix::Identity(n, n); };
  d.isometry1 = (res.j1.adjoint() * res.j1 - id(res.j1.cols())).cwiseAbs().maxCoeff();
  d.isometry2 = (res.j2.adjoint() * res.j2 - id(res.j2.cols())).cwiseAbs().maxCoeff();
  d.pairing = (res.j1.adjoint() * res.j2 - res.c).cwiseAbs().maxCoeff();
  const Subspace generated = linalg::join(linalg::orthonormalize(res.j1), linalg::orthonormalize(res.j2));
  d.generation = linalg::projector_distance(generated, Subspace::full(res.slot_dim));
  return d;
}

lattice::Subsystem spatial_product_in_tensor(const ComplexVector& u1, const ComplexVector& u2,
                                             std::size_t depth) {
  require_normalised(u1, "first unit");
  require_normalised(u2, "second unit");
  const auto g1 = u1.size();
  const auto g2 = u2.size();
  const ComplexMatrix left = linalg::kron(ComplexMatrix::Identity(g1, g1), ComplexMatrix(u2));
  const ComplexMatrix right = linalg::kron(ComplexMatrix(u1), ComplexMatrix::Identity(g2, g2));
  const Subspace level1 = linalg::join(linalg::orthonormalize(left), linalg::orthonormalize(right));
  return lattice::Subsystem(level1, depth);
}

AmalgamRoots root_space_of_amalgam(const AmalgamResult& res, const ComplexVector& u2,
                                   std::size_t depth) {
  require_normalised(u2, "unit of the second system");
  if (u2.size() != res.c.cols()) throw DimensionError("unit does not live in the source slot of C");
  const ComplexMatrix& c = res.c;
  if ((c.adjoint() * (c * u2) - u2).norm() > 1e-10) {
    throw PartialIsometryPrecondition("C^dagger C u2 != u2");
  }
  if ((c * c.adjoint() * c - c).cwiseAbs().maxCoeff() > 1e-10) {
    throw PartialIsometryPrecondition("C is not a partial isometry");
  }
  AmalgamRoots out;
  out.unit = res.j2 * u2;
  const auto system = lattice::Subsystem::full(res.slot_dim, depth);
  out.solver_route = lattice::solve_addit_seeds(system, out.unit).roots;

  const ComplexVector u1 = c * u2;
  const Subspace r1 = linalg::complement(Subspace::line(u1));
  const Subspace r2 = linalg::complement(Subspace::line(u2));
  ComplexMatrix spans(static_cast<Eigen::Index>(res.slot_dim),
                      static_cast<Eigen::Index>(r1.rank() + r2.rank()));
  spans << res.j1 * r1.basis(), res.j2 * r2.basis();
  out.formula_route = linalg::orthonormalize(spans);
  out.defect = linalg::projector_distance(out.solver_route, out.formula_route);
  if (out.defect >= linalg::kSubspaceEqualTol) {
    throw VerificationFailure("amalgam root space routes disagree (defect " + std::to_string(out.defect) + ")");
  }
  return out;
}

double spatial_tensor_defect(const ComplexVector& c, const ComplexVector& d, double horizon,
                             std::size_t n_slots) {
  if (n_slots == 0) throw RangeError("need at least one slot");
  if (!(horizon > 0.0)) throw RangeError("horizon must be positive");
  const double delta = horizon / static_cast<double>(n_slots);
  const auto slot_vector = [delta](const ComplexVector& x) {
    ComplexVector v(x.size() + 1);
    v(0) = 1.0;
    v.tail(x.size()) = std::sqrt(delta) * x;
    return v;
  };
  const auto vacuum = [](Eigen::Index dim) {
    ComplexVector e = ComplexVector::Zero(dim);
    e(0) = 1.0;
    return e;
  };
  const ComplexVector v = slot_vector(c);
  const ComplexVector w = slot_vector(d);
  const auto spatial = spatial_product_in_tensor(vacuum(v.size()), vacuum(w.size()), 1);
  ComplexVector z = linalg::kron(v, w);
  z.normalize();
  // Level n is level1^{(x)n} and z^{(x)n} is a product vector, so the retained
  // weight factorises over slots.
  const double slot_defect = (z - spatial.level1().project(z)).squaredNorm();
  return -std::expm1(static_cast<double>(n_slots) * std::log1p(-slot_defect));
}

}  // namespace prodsys::amalgam
