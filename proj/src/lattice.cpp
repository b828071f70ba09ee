#include "prodsys/lattice.hpp"

#include <cmath>
#include <string>

#include "prodsys/errors.hpp"
#include "prodsys/kernels.hpp"

namespace prodsys::lattice {

using kernels::ipow;

namespace {

void require_normalised(const ComplexVector& u) {
  if (u.size() == 0) throw InvalidUnit("empty unit vector");
  if (std::abs(u.norm() - 1.0) > 1e-12) {
    throw InvalidUnit("reference unit must have norm 1 (got " + std::to_string(u.norm()) + ")");
  }
}

void require_fiber_capacity(std::size_t g, std::size_t n) {
  const double dim = std::pow(static_cast<double>(g), static_cast<double>(n));
  if (dim > static_cast<double>(kMaxFiberDim)) {
    throw CapacityError("fiber dimension " + std::to_string(g) + "^" + std::to_string(n) +
                        " exceeds " + std::to_string(kMaxFiberDim));
  }
}

}  // namespace

ProductSystem::ProductSystem(ComplexVector reference_unit) : unit_(std::move(reference_unit)) {
  require_normalised(unit_);
}

ComplexVector unit_section(const ComplexVector& v, std::size_t n) {
  if (v.size() == 0 || v.norm() == 0.0) throw InvalidUnit("a unit must be a nonzero section");
  ComplexVector out = ComplexVector::Ones(1);
  for (std::size_t i = 0; i < n; ++i) out = linalg::kron(out, v);
  return out;
}

ComplexVector addit_section(const ComplexVector& u, const ComplexVector& a1, std::size_t n) {
  require_normalised(u);
  if (a1.size() != u.size()) throw DimensionError("addit seed and unit live in different slots");
  // prefix[j] = u^{(x)j}; the j-th term is prefix[j] (x) a1 (x) u^{(x)(n-1-j)}.
  std::vector<ComplexVector> powers(n + 1);
  powers[0] = ComplexVector::Ones(1);
  for (std::size_t j = 1; j <= n; ++j) powers[j] = linalg::kron(powers[j - 1], u);
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(ipow(u.size(), n)));
  for (std::size_t j = 0; j < n; ++j) {
    out += linalg::kron(linalg::kron(powers[j], a1), powers[n - 1 - j]);
  }
  return out;
}

AdditDecomposition addit_decompose(const ComplexVector& u, const ComplexVector& a1) {
  require_normalised(u);
  if (a1.size() != u.size()) throw DimensionError("addit seed and unit live in different slots");
  const Complex lambda = u.dot(a1);  // conjugate-linear in u
  return {lambda, a1 - lambda * u};
}

Complex addit_inner(const ComplexVector& u, const ComplexVector& a1, const ComplexVector& b1,
                    std::size_t n) {
  const auto a = addit_decompose(u, a1);
  const auto b = addit_decompose(u, b1);
  const double nn = static_cast<double>(n);
  return nn * nn * std::conj(a.trivial_coeff) * b.trivial_coeff + nn * a.root_part.dot(b.root_part);
}

// ---------------------------------------------------------------------------

Subsystem::Subsystem(Subspace level1, std::size_t depth)
    : level1_(std::move(level1)), depth_(depth), slot_projector_(linalg::projector(level1_)) {
  if (level1_.ambient_dim() == 0) throw InvalidInput("subsystem over an empty slot");
  if (depth_ == 0) throw InvalidInput("subsystem depth must be positive");
}

Subsystem Subsystem::full(std::size_t slot_dim, std::size_t depth) {
  return Subsystem(Subspace::full(slot_dim), depth);
}

Subsystem Subsystem::unit_line(const ComplexVector& u, std::size_t depth) {
  require_normalised(u);
  return Subsystem(Subspace::line(u), depth);
}

Subspace Subsystem::level(std::size_t n) const {
  if (n == 0 || n > depth_) throw RangeError("level " + std::to_string(n) + " outside 1.." + std::to_string(depth_));
  require_fiber_capacity(slot_dim(), n);
  return linalg::tensor_power(level1_, n);
}

ComplexVector Subsystem::project(std::size_t n, const ComplexVector& v) const {
  const std::size_t g = slot_dim();
  if (static_cast<std::size_t>(v.size()) != ipow(g, n)) throw DimensionError("project: vector is not in level " + std::to_string(n));
  if (level1_.is_full()) return v;
  ComplexMatrix state = v;
  for (std::size_t slot = 0; slot < n; ++slot) {
    state = kernels::parallel::apply_slot(state, slot_projector_, g, n, slot);
  }
  return state.col(0);
}

double Subsystem::product_defect() const {
  double worst = 0.0;
  for (std::size_t total = 2; total <= depth_; ++total) {
    if (std::pow(static_cast<double>(slot_dim()), static_cast<double>(total)) > kMaxFiberDim) break;
    const Subspace whole = level(total);
    for (std::size_t m = 1; m < total; ++m) {
      worst = std::max(worst, linalg::projector_distance(whole, linalg::tensor(level(m), level(total - m))));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

InclusionSystem::InclusionSystem(std::size_t slot_dim, std::vector<Subspace> levels)
    : slot_dim_(slot_dim), levels_(std::move(levels)) {
  if (slot_dim_ == 0) throw InvalidInput("inclusion system over an empty slot");
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k].ambient_dim() != ipow(slot_dim_, k + 1)) {
      throw DimensionError("inclusion system level " + std::to_string(k + 1) + " has the wrong ambient dimension");
    }
  }
}

InclusionSystem InclusionSystem::from_subsystem(const Subsystem& s) {
  std::vector<Subspace> levels;
  for (std::size_t n = 1; n <= s.depth(); ++n) levels.push_back(s.level(n));
  return InclusionSystem(s.slot_dim(), std::move(levels));
}

const Subspace& InclusionSystem::level(std::size_t n) const {
  if (n == 0 || n > levels_.size()) throw RangeError("level " + std::to_string(n) + " outside 1.." + std::to_string(levels_.size()));
  return levels_[n - 1];
}

double InclusionSystem::compatibility_defect() const {
  double worst = 0.0;
  for (std::size_t total = 2; total <= depth(); ++total) {
    for (std::size_t m = 1; m < total; ++m) {
      const Subspace product = linalg::tensor(level(m), level(total - m));
      worst = std::max(worst, linalg::containment_defect(product, level(total)));
    }
  }
  return worst;
}

InclusionSystem fock_inclusion(const ComplexVector& u, std::size_t depth) {
  require_normalised(u);
  const std::size_t g = static_cast<std::size_t>(u.size());
  const Subspace excitations = linalg::complement(Subspace::line(u));
  std::vector<Subspace> levels;
  for (std::size_t n = 1; n <= depth; ++n) {
    require_fiber_capacity(g, n);
    const std::size_t cols = 1 + n * excitations.rank();
    ComplexMatrix vectors(static_cast<Eigen::Index>(ipow(g, n)), static_cast<Eigen::Index>(cols));
    vectors.col(0) = unit_section(u, n);
    Eigen::Index c = 1;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t x = 0; x < excitations.rank(); ++x) {
        const ComplexVector ex = excitations.basis().col(static_cast<Eigen::Index>(x));
        vectors.col(c++) = linalg::kron(linalg::kron(unit_section(u, j), ex), unit_section(u, n - 1 - j));
      }
    }
    levels.push_back(linalg::orthonormalize(vectors));
  }
  return InclusionSystem(g, std::move(levels));
}

// ---------------------------------------------------------------------------

SeedSpace solve_addit_seeds(const Subspace& candidates, const LevelProjector& project,
                            std::size_t depth, const ComplexVector& u) {
  require_normalised(u);
  if (static_cast<std::size_t>(u.size()) != candidates.ambient_dim()) {
    throw DimensionError("unit and candidate seeds live in different slots");
  }
  const std::size_t g = candidates.ambient_dim();
  for (std::size_t n = 1; n <= depth; ++n) {
    const ComplexVector un = unit_section(u, n);
    if ((un - project(n, un)).norm() > linalg::kContainTol) {
      throw InvalidUnit("u^(x)" + std::to_string(n) + " is not in level " + std::to_string(n));
    }
  }
  const std::size_t r = candidates.rank();
  if (r == 0) return {Subspace::zero(g), Subspace::zero(g)};

  std::size_t rows = 0;
  for (std::size_t n = 1; n <= depth; ++n) rows += ipow(g, n);
  ComplexMatrix constraints(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(r));
  for (std::size_t k = 0; k < r; ++k) {
    const ComplexVector seed = candidates.basis().col(static_cast<Eigen::Index>(k));
    Eigen::Index offset = 0;
    for (std::size_t n = 1; n <= depth; ++n) {
      const ComplexVector an = addit_section(u, seed, n);
      const auto len = static_cast<Eigen::Index>(an.size());
      constraints.col(static_cast<Eigen::Index>(k)).segment(offset, len) = an - project(n, an);
      offset += len;
    }
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(constraints, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = linalg::kRankTol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index nonnull = 0;
  while (nonnull < sv.size() && sv(nonnull) > cutoff) ++nonnull;
  const ComplexMatrix null_coeffs = svd.matrixV().rightCols(static_cast<Eigen::Index>(r) - nonnull);
  Subspace seeds = Subspace::unchecked(candidates.basis() * null_coeffs);
  Subspace roots = linalg::intersect(seeds, linalg::complement(Subspace::line(u)));
  return {std::move(seeds), std::move(roots)};
}

SeedSpace solve_addit_seeds(const Subsystem& sub, const ComplexVector& u) {
  if (!linalg::contains(sub.level1(), Subspace::line(u))) throw InvalidUnit("unit is not in level 1 of the subsystem");
  return solve_addit_seeds(
      sub.level1(), [&sub](std::size_t n, const ComplexVector& v) { return sub.project(n, v); },
      sub.depth(), u);
}

SeedSpace solve_addit_seeds(const InclusionSystem& inc, const ComplexVector& u) {
  if (inc.depth() == 0) throw InvalidInput("inclusion system has no levels");
  if (!linalg::contains(inc.level(1), Subspace::line(u))) throw InvalidUnit("unit is not in level 1 of the inclusion system");
  return solve_addit_seeds(
      inc.level(1), [&inc](std::size_t n, const ComplexVector& v) { return inc.level(n).project(v); },
      inc.depth(), u);
}

// ---------------------------------------------------------------------------

GenerationReport generate_with_report(const InclusionSystem& inc) {
  if (inc.depth() == 0) throw InvalidInclusionSystem("no levels");
  const double defect = inc.compatibility_defect();
  if (defect >= linalg::kContainTol) {
    throw InvalidInclusionSystem("levels[m+n] not inside levels[m] (x) levels[n] (defect " + std::to_string(defect) + ")");
  }
  const std::size_t g = inc.slot_dim();
  // Tensor products distribute over joins, so the join over all compositions
  // of n equals the join over the first part k of levels[k] (x) generated[n-k].
  std::vector<Subspace> generated{Subspace::full(1)};
  GenerationReport report{Subsystem(inc.level(1), inc.depth()), {}, 0.0};
  for (std::size_t n = 1; n <= inc.depth(); ++n) {
    std::vector<Subspace> pieces;
    for (std::size_t k = 1; k <= n; ++k) pieces.push_back(linalg::tensor(inc.level(k), generated[n - k]));
    generated.push_back(linalg::join(pieces, ipow(g, n)));
    const Subspace finest = report.system.level(n);
    report.route_defect = std::max(report.route_defect, linalg::projector_distance(generated.back(), finest));
  }
  report.joined_levels.assign(generated.begin() + 1, generated.end());
  if (report.route_defect >= linalg::kSubspaceEqualTol) {
    throw VerificationFailure("composition join disagrees with the finest composition (defect " +
                              std::to_string(report.route_defect) + ")");
  }
  return report;
}

Subsystem generate_product_system(const InclusionSystem& inc) { return generate_with_report(inc).system; }

// ---------------------------------------------------------------------------

std::vector<std::size_t> flip_permutation(std::size_t g, std::size_t n, std::size_t k) {
  if (k > n) throw RangeError("flip shift " + std::to_string(k) + " exceeds " + std::to_string(n) + " slots");
  const std::size_t head = ipow(g, n - k);
  const std::size_t tail = ipow(g, k);
  std::vector<std::size_t> perm(head * tail);
  for (std::size_t x = 0; x < head; ++x) {
    for (std::size_t y = 0; y < tail; ++y) perm[x * tail + y] = y * head + x;
  }
  return perm;
}

ComplexMatrix flip_unitary(std::size_t g, std::size_t n, std::size_t k) {
  const auto perm = flip_permutation(g, n, k);
  require_fiber_capacity(g, n);
  const auto dim = static_cast<Eigen::Index>(perm.size());
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < perm.size(); ++i) m(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(i)) = 1.0;
  return m;
}

Composition Composition::make(std::vector<std::size_t> parts) {
  Composition c;
  for (auto p : parts) {
    if (p == 0) throw InvalidInput("composition parts must be positive");
    c.total += p;
  }
  c.parts = std::move(parts);
  return c;
}

std::vector<Composition> compositions(std::size_t n) {
  if (n == 0) return {};
  if (n > 24) throw RangeError("too many compositions of " + std::to_string(n));
  std::vector<Composition> out;
  // Bit i of `cuts` set means a cut after position i+1.
  for (std::uint64_t cuts = 0; cuts < (std::uint64_t{1} << (n - 1)); ++cuts) {
    std::vector<std::size_t> parts;
    std::size_t run = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (cuts & (std::uint64_t{1} << i)) {
        parts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    parts.push_back(run);
    out.push_back(Composition::make(std::move(parts)));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<NetRow> composition_net_inner(const NetSpec& spec) {
  if (!spec.unit) throw InvalidInput("composition net needs a unit evaluator");
  if (!(spec.horizon > 0.0)) throw RangeError("horizon must be positive");
  if (spec.depth > 30) throw RangeError("refinement depth above 30");

  auto evaluate = [](const SlotEvaluator& f, double t, const char* what) {
    auto v = f(t);
    if (!v) throw EvaluationError(std::string(what) + " undefined at t = " + std::to_string(t));
    return *v;
  };

  std::vector<NetRow> rows;
  for (unsigned j = 0; j <= spec.depth; ++j) {
    NetRow row;
    row.level = j;
    row.parts = std::uint64_t{1} << j;
    row.step = std::ldexp(spec.horizon, -static_cast<int>(j));
    const ComplexVector u = evaluate(spec.unit, row.step, "unit");
    const ComplexVector v = spec.other_unit ? evaluate(spec.other_unit, row.step, "second unit") : u;
    if (v.size() != u.size()) throw EvaluationError("unit evaluators disagree on slot dimension");
    row.unit_inner = linalg::integer_power(u.dot(v), row.parts);
    if (spec.addit) {
      const ComplexVector a = evaluate(spec.addit, row.step, "addit");
      if (a.size() != u.size()) throw EvaluationError("addit and unit disagree on slot dimension");
      // Uniform composition with N parts; U = |u_t|^2, alpha = <u_t, a_t>, A = |a_t|^2:
      // |a_t|^2 = N A U^(N-1) + N(N-1) |alpha|^2 U^(N-2),  <u_t, a_t> = N alpha U^(N-1).
      const double n_parts = static_cast<double>(row.parts);
      const double unorm2 = u.squaredNorm();
      const Complex alpha = u.dot(a);
      const double anorm2 = a.squaredNorm();
      const double u_pow1 = row.parts >= 1 ? linalg::integer_power(unorm2, row.parts - 1).real() : 1.0;
      const double u_pow2 = row.parts >= 2 ? linalg::integer_power(unorm2, row.parts - 2).real() : 0.0;
      row.addit_norm2 = n_parts * anorm2 * u_pow1 + n_parts * (n_parts - 1.0) * std::norm(alpha) * u_pow2;
      row.unit_addit = n_parts * alpha * u_pow1;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace prodsys::lattice
