#include "prodsys/random_sets.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "prodsys/cluster.hpp"
#include "prodsys/errors.hpp"
#include "prodsys/kernels.hpp"

namespace prodsys::random_sets {

using kernels::ipow;

namespace {

constexpr double kProjectorTol = 1e-10;
constexpr double kStateTol = 1e-12;
constexpr double kClampTol = 1e-12;
constexpr double kVerifyTol = 1e-10;
constexpr long long kMaxDenominator = 1'000'000'000'000LL;

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

void require_dense(const ProjectionFamily& p) {
  if (p.dim() > kMaxDenseDim) {
    throw CapacityError("g^n = " + std::to_string(p.dim()) + " exceeds the dense limit " +
                        std::to_string(kMaxDenseDim));
  }
}

// Excited-cell mask of every basis vector of V^{(x)n}.
std::vector<CellMask> excitation_masks(const ProjectionFamily& p) {
  const std::size_t g = p.slot_dim();
  const std::size_t n = p.cells();
  std::vector<CellMask> out(p.dim());
  for (std::size_t x = 0; x < out.size(); ++x) {
    CellMask mask = 0;
    std::size_t rest = x;
    for (std::size_t slot = n; slot-- > 0;) {
      if (rest % g >= p.slot_rank()) mask |= CellMask{1} << slot;
      rest /= g;
    }
    out[x] = mask;
  }
  return out;
}

// Slot digits excited in the computational basis, if P is diagonal 0/1.
std::optional<std::vector<bool>> diagonal_excitations(const ComplexMatrix& p) {
  std::vector<bool> excited(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (i != j && std::abs(p(i, j)) > kStateTol) return std::nullopt;
    }
    const auto d = p(i, i);
    if (std::abs(d) <= kStateTol) {
      excited[static_cast<std::size_t>(i)] = true;
    } else if (std::abs(d - 1.0) > kStateTol) {
      return std::nullopt;
    }
  }
  return excited;
}

// Exact weight of each excited set, when rho and the family allow it.
std::optional<std::vector<Rational>> exact_atom_weights(const ProjectionFamily& p,
                                                         const StateDensity& rho) {
  const std::size_t g = p.slot_dim();
  const std::size_t n = p.cells();
  std::vector<Rational> w(std::size_t{1} << n, Rational(0));
  if (rho.tracial()) {
    // r^{n-|T|} (g-r)^{|T|} basis vectors of V^{(x)n} have excited set T.
    const BigInt r = p.slot_rank();
    const BigInt e = g - p.slot_rank();
    const BigInt total = BigInt(ipow(g, n));
    for (std::size_t t = 0; t < w.size(); ++t) {
      const auto k = static_cast<unsigned>(std::popcount(t));
      w[t] = Rational(boost::multiprecision::pow(r, n - k) * boost::multiprecision::pow(e, k), total);
    }
    return w;
  }
  const auto& diag = rho.exact_diagonal();
  if (!diag) return std::nullopt;
  const auto excited = diagonal_excitations(p.slot_projector());
  if (!excited) return std::nullopt;
  for (std::size_t x = 0; x < diag->size(); ++x) {
    CellMask mask = 0;
    std::size_t rest = x;
    for (std::size_t slot = n; slot-- > 0;) {
      if ((*excited)[rest % g]) mask |= CellMask{1} << slot;
      rest /= g;
    }
    w[mask] += (*diag)[x];
  }
  return w;
}

}  // namespace

ProjectionFamily::ProjectionFamily(ComplexMatrix slot_projector, std::size_t cells)
    : slot_projector_(std::move(slot_projector)), cells_(cells) {
  if (cells_ == 0 || cells_ > kMaxCells) {
    throw RangeError("cell count " + std::to_string(cells_) + " outside 1.." + std::to_string(kMaxCells));
  }
  if (slot_projector_.rows() == 0 || slot_projector_.rows() != slot_projector_.cols()) {
    throw InvalidInput("slot projector must be a nonempty square matrix");
  }
  if (max_abs(slot_projector_ - slot_projector_.adjoint()) > kProjectorTol ||
      max_abs(slot_projector_ * slot_projector_ - slot_projector_) > kProjectorTol) {
    throw InvalidInput("slot operator is not an orthogonal projection");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (slot_projector_ + slot_projector_.adjoint()));
  const auto& values = es.eigenvalues();
  // Ascending eigenvalues: reverse so the range of P comes first.
  eigenbasis_ = es.eigenvectors().rowwise().reverse();
  slot_rank_ = static_cast<std::size_t>((values.array() > 0.5).count());
  if (slot_rank_ == 0) throw NonzeroProjectionViolation("slot projection is zero");
}

std::size_t ProjectionFamily::dim() const { return ipow(slot_dim(), cells_); }

ComplexMatrix ProjectionFamily::block(std::size_t r, std::size_t t) const {
  if (!(r < t) || t > cells_) {
    throw RangeError("block [" + std::to_string(r) + "," + std::to_string(t) + ") outside 0.." +
                     std::to_string(cells_));
  }
  require_dense(*this);
  ComplexMatrix m = identity(ipow(slot_dim(), r));
  for (std::size_t i = r; i < t; ++i) m = linalg::kron(m, slot_projector_);
  return linalg::kron(m, identity(ipow(slot_dim(), cells_ - t)));
}

double ProjectionFamily::evolution_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < cells_; ++r) {
    for (std::size_t s = r + 1; s < cells_; ++s) {
      for (std::size_t t = s + 1; t <= cells_; ++t) {
        worst = std::max(worst, max_abs(block(r, s) * block(s, t) - block(r, t)));
      }
    }
  }
  return worst;
}

double ProjectionFamily::biadaptedness_defect() const {
  const std::size_t g = slot_dim();
  double worst = 0.0;
  for (std::size_t r = 0; r < cells_; ++r) {
    for (std::size_t t = r + 1; t <= cells_; ++t) {
      const ComplexMatrix p = block(r, t);
      const auto mid = static_cast<Eigen::Index>(ipow(g, t - r));
      const auto tail = static_cast<Eigen::Index>(ipow(g, cells_ - t));
      ComplexMatrix m(mid, mid);
      for (Eigen::Index a = 0; a < mid; ++a) {
        for (Eigen::Index b = 0; b < mid; ++b) m(a, b) = p(a * tail, b * tail);
      }
      const ComplexMatrix rebuilt =
          linalg::kron(linalg::kron(identity(ipow(g, r)), m), identity(static_cast<std::size_t>(tail)));
      worst = std::max(worst, max_abs(p - rebuilt));
    }
  }
  return worst;
}

ProjectionFamily projections_from_subsystem(const lattice::Subsystem& f, std::size_t cells) {
  if (f.level1().is_zero()) throw NonzeroProjectionViolation("subsystem has a zero level");
  return ProjectionFamily(f.slot_projector(), cells);
}

StateDensity StateDensity::from_matrix(ComplexMatrix rho) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) throw InvalidInput("density matrix must be square and nonempty");
  if (!linalg::all_finite(rho)) throw InvalidInput("density matrix has non-finite entries");
  if (max_abs(rho - rho.adjoint()) > kStateTol) throw InvalidInput("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kStateTol) throw InvalidInput("density matrix does not have trace 1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  const double low = es.eigenvalues().minCoeff();
  if (low < -kStateTol) throw InvalidInput("density matrix is not positive semidefinite");
  StateDensity s;
  s.rho_ = std::move(rho);
  s.faithful_ = low > kStateTol;
  return s;
}

StateDensity StateDensity::tracial(std::size_t dim) {
  if (dim == 0) throw InvalidInput("state dimension must be positive");
  StateDensity s = rational_diagonal(std::vector<Rational>(dim, Rational(1, static_cast<long long>(dim))));
  s.tracial_ = true;
  return s;
}

StateDensity StateDensity::rational_diagonal(std::vector<Rational> weights) {
  if (weights.empty()) throw InvalidInput("state dimension must be positive");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw InvalidInput("negative diagonal weight " + to_string(w));
    total += w;
  }
  if (total != 1) throw InvalidInput("diagonal weights sum to " + to_string(total) + ", not 1");
  StateDensity s;
  const auto dim = static_cast<Eigen::Index>(weights.size());
  s.rho_ = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) s.rho_(i, i) = to_double(weights[static_cast<std::size_t>(i)]);
  s.faithful_ = std::all_of(weights.begin(), weights.end(), [](const Rational& w) { return w > 0; });
  s.diagonal_ = std::move(weights);
  return s;
}

StateDensity StateDensity::geometric_diagonal(std::size_t dim) {
  if (dim == 0) throw InvalidInput("state dimension must be positive");
  const BigInt total = (BigInt(1) << dim) - 1;
  std::vector<Rational> w;
  for (std::size_t i = 0; i < dim; ++i) w.emplace_back(BigInt(1) << i, total);
  return rational_diagonal(std::move(w));
}

StateDensity StateDensity::random_faithful_diagonal(std::size_t dim, std::mt19937_64& rng) {
  if (dim == 0) throw InvalidInput("state dimension must be positive");
  std::vector<BigInt> raw;
  BigInt total = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    raw.emplace_back(rng() % 64 + 1);
    total += raw.back();
  }
  std::vector<Rational> w;
  for (const auto& r : raw) w.emplace_back(r, total);
  return rational_diagonal(std::move(w));
}

StateDensity StateDensity::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidInput("pure state needs a nonzero finite vector");
  const ComplexVector v = psi / norm;
  return from_matrix(v * v.adjoint());
}

hyperspace::ClosedSet render_atom(CellMask excited, std::size_t cells, AtomRendering rendering) {
  if (cells == 0 || cells > kMaxCells) throw RangeError("cell count outside 1.." + std::to_string(kMaxCells));
  std::vector<hyperspace::Interval> parts;
  const auto n = static_cast<long long>(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    if (!(excited >> i & 1U)) continue;
    const auto k = static_cast<long long>(i);
    if (rendering == AtomRendering::Points) {
      parts.push_back({Rational(k, n), Rational(k, n)});
    } else {
      parts.push_back({Rational(k, n), Rational(k + 1, n)});
    }
  }
  return hyperspace::ClosedSet::normalize(std::move(parts));
}

Measure measure_from_state(const ProjectionFamily& p, const StateDensity& rho, AtomRendering rendering) {
  if (rho.dim() != p.dim()) throw DimensionError("state dimension differs from g^n");
  const auto n = static_cast<unsigned>(p.cells());
  const std::size_t size = std::size_t{1} << n;
  const std::size_t all = size - 1;
  Measure out;
  out.non_faithful_warning = !rho.faithful();

  bool exact = false;
  if (auto w = exact_atom_weights(p, rho)) {
    // q(A) = sum of weights of excited sets avoiding A.
    std::vector<Rational> avoid = std::move(*w);
    kernels::parallel::subset_sum(avoid, n);
    out.miss.resize(size);
    for (std::size_t a = 0; a < size; ++a) out.miss[a] = to_double(avoid[all & ~a]);
    // f[S] = q(S^c) is exactly `avoid`; invert it.
    kernels::parallel::mobius(avoid, n);
    out.by_mask = std::move(avoid);
    exact = true;
  } else {
    out.miss = kernels::parallel::miss_probabilities(rho.matrix(), p.slot_projector(), p.slot_dim(), n);
    std::vector<double> f(size);
    for (std::size_t s = 0; s < size; ++s) f[s] = out.miss[all & ~s];
    kernels::parallel::mobius(f, n);
    out.by_mask.resize(size);
    for (std::size_t t = 0; t < size; ++t) {
      if (f[t] < -kClampTol) {
        throw InconsistentFamily("atom " + render_atom(static_cast<CellMask>(t), n, rendering).to_text() +
                                 " has probability " + std::to_string(f[t]));
      }
      out.by_mask[t] = f[t] <= 0.0 ? Rational(0) : rationalize(f[t], kMaxDenominator);
    }
  }

  std::vector<hyperspace::RandomClosedSetDist::Atom> atoms;
  for (std::size_t t = 0; t < size; ++t) {
    if (exact && out.by_mask[t] < 0) {
      throw InconsistentFamily("atom has negative probability " + to_string(out.by_mask[t]));
    }
    if (out.by_mask[t] > 0) atoms.emplace_back(render_atom(static_cast<CellMask>(t), n, rendering), out.by_mask[t]);
  }
  out.dist = hyperspace::RandomClosedSetDist::from_atoms(std::move(atoms), exact);
  return out;
}

hyperspace::RandomClosedSetDist pushforward_cb(const hyperspace::RandomClosedSetDist& dist) {
  std::vector<hyperspace::RandomClosedSetDist::Atom> image;
  for (const auto& [set, prob] : dist.atoms()) image.emplace_back(hyperspace::cb_derivative(set), prob);
  return hyperspace::RandomClosedSetDist::from_atoms(std::move(image), dist.exact());
}

ComplexMatrix indicator_projection(const ProjectionFamily& p, const Event& event) {
  require_dense(p);
  ComplexMatrix w = ComplexMatrix::Ones(1, 1);
  for (std::size_t i = 0; i < p.cells(); ++i) w = linalg::kron(w, p.eigenbasis());
  const auto masks = excitation_masks(p);
  std::vector<Eigen::Index> keep;
  for (std::size_t x = 0; x < masks.size(); ++x) {
    if (event(masks[x])) keep.push_back(static_cast<Eigen::Index>(x));
  }
  ComplexMatrix selected(w.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) selected.col(static_cast<Eigen::Index>(k)) = w.col(keep[k]);
  return selected * selected.adjoint();
}

namespace {

std::string block_label(std::size_t s, std::size_t t) {
  return "block [" + std::to_string(s) + "," + std::to_string(t) + ")";
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

CheckResult compare_laws(const hyperspace::RandomClosedSetDist& a, const hyperspace::RandomClosedSetDist& b) {
  std::set<hyperspace::ClosedSet> support;
  for (const auto& atom : a.atoms()) support.insert(atom.first);
  for (const auto& atom : b.atoms()) support.insert(atom.first);
  double worst = 0.0;
  std::string where;
  for (const auto& z : support) {
    const double d = std::abs(to_double(a.prob(z) - b.prob(z)));
    if (d >= worst) {
      worst = d;
      where = "atom '" + z.to_text() + "'";
    }
  }
  const bool exact = a.exact() && b.exact();
  return {"cb_pushforward", exact ? a == b : worst < kVerifyTol, worst,
          where + (exact ? ", exact" : ", rounded")};
}

}  // namespace

DerivativeReport verify_derivative_correspondence(const lattice::Subsystem& f, const StateDensity& rho,
                                                  std::size_t cells) {
  const ProjectionFamily family = projections_from_subsystem(f, cells);
  require_dense(family);
  const std::size_t g = family.slot_dim();
  const auto inclusion = cluster::cluster_inclusion(f, cells);
  const lattice::Subsystem cluster_sys = lattice::generate_product_system(inclusion);
  const ProjectionFamily cluster_family = projections_from_subsystem(cluster_sys, cells);

  DerivativeReport report;
  report.measure = measure_from_state(family, rho);
  report.cluster_measure = measure_from_state(cluster_family, rho);

  CheckResult at_most_one{"block_at_most_one_excitation", true, 0.0, ""};
  CheckResult finite{"finite_excitation_identity", true, 0.0, ""};
  const ComplexMatrix always = indicator_projection(family, [](CellMask) { return true; });
  for (std::size_t s = 0; s < cells; ++s) {
    for (std::size_t t = s + 1; t <= cells; ++t) {
      const CellMask window = ((CellMask{1} << (t - s)) - 1) << s;
      const ComplexMatrix lhs = indicator_projection(
          family, [window](CellMask m) { return std::popcount(m & window) <= 1; });
      const ComplexMatrix rhs =
          linalg::kron(linalg::kron(identity(ipow(g, s)), linalg::projector(inclusion.level(t - s))),
                       identity(ipow(g, cells - t)));
      const double d1 = (lhs - rhs).norm();
      if (d1 >= at_most_one.max_defect) {
        at_most_one.max_defect = d1;
        at_most_one.detail = block_label(s, t) + ", projector distance " + sci(d1);
      }
      const double d2 = (always - cluster_family.block(s, t)).norm();
      if (d2 >= finite.max_defect) {
        finite.max_defect = d2;
        finite.detail = block_label(s, t) + ", projector distance " + sci(d2);
      }
    }
  }
  at_most_one.pass = at_most_one.max_defect < kVerifyTol;
  finite.pass = finite.max_defect < kVerifyTol;
  report.checks.push_back(std::move(at_most_one));
  report.checks.push_back(std::move(finite));
  report.checks.push_back(compare_laws(pushforward_cb(report.measure.dist), report.cluster_measure.dist));
  return report;
}

bool state_equivalence_check(const ProjectionFamily& p, const StateDensity& rho1, const StateDensity& rho2) {
  if (!rho1.faithful() || !rho2.faithful()) throw PreconditionError("state equivalence needs faithful states");
  const auto m1 = measure_from_state(p, rho1);
  const auto m2 = measure_from_state(p, rho2);
  for (std::size_t t = 0; t < m1.by_mask.size(); ++t) {
    if ((m1.by_mask[t] > 0) != (m2.by_mask[t] > 0)) return false;
  }
  return true;
}

}  // namespace prodsys::random_sets
