#include "prodsys/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "prodsys/amalgam.hpp"
#include "prodsys/cluster.hpp"
#include "prodsys/errors.hpp"
#include "prodsys/fock.hpp"
#include "prodsys/hyperspace.hpp"
#include "prodsys/kernels.hpp"
#include "prodsys/lattice.hpp"
#include "prodsys/random.hpp"
#include "prodsys/random_sets.hpp"

namespace prodsys::selftest {

namespace {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::Subspace;

// Accumulates the worst defect and the first failure message.
struct Tally {
  double worst = 0.0;
  std::string failure;

  void defect(double d, double tol, const std::string& where) {
    worst = std::max(worst, d);
    if (!(d <= tol) && failure.empty()) failure = where + " defect " + std::to_string(d);
  }
  void require(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
  bool ok() const { return failure.empty(); }
};

ComplexVector basis_vector(std::size_t dim, std::size_t i) {
  ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

CriterionResult finish(CriterionResult r, const Tally& t, std::string summary) {
  r.pass = t.ok();
  r.max_defect = t.worst;
  r.detail = t.ok() ? std::move(summary) : t.failure;
  return r;
}

CriterionResult euler_limit(gen::Rng&) {
  CriterionResult r{1, "euler_limit", false, 0.0, "", 0.0, 1.0};
  Tally t;
  ComplexVector c(2);
  c << Complex(0.6, 0.0), Complex(0.0, 0.8);
  double previous = 0.0;
  for (unsigned n = 0; n <= 16; ++n) {
    const double got = fock::euler_norm_defect(c, 1.0, n);
    const long double parts = std::ldexp(1.0L, static_cast<int>(n));
    const long double oracle = std::exp(1.0L) - std::pow(1.0L + 1.0L / parts, parts);
    t.defect(std::abs(got - static_cast<double>(oracle)), 1e-12, "n=" + std::to_string(n));
    if (n > 0) t.require(got < previous, "not strictly decreasing at n=" + std::to_string(n));
    previous = got;
  }
  const double at4 = fock::euler_norm_defect(c, 1.0, 4);
  t.require(std::abs(at4 - 0.0804) < 5e-5, "value at n=4 is " + std::to_string(at4));
  char buf[64];
  std::snprintf(buf, sizeof buf, "defect(4)=%.6f, n<=16", at4);
  return finish(r, t, buf);
}

CriterionResult root_index(gen::Rng& rng) {
  CriterionResult r{2, "root_index_match", false, 0.0, "", 0.0, 5.0};
  Tally t;
  std::string summary;
  for (std::size_t g = 2; g <= 4; ++g) {
    const ComplexVector u = gen::unit_vector(rng, g);
    const auto seeds = lattice::solve_addit_seeds(lattice::Subsystem::full(g), u);
    std::vector<fock::UnitLabel> units{fock::label_of_slot_unit(u, u)};
    for (std::size_t k = 0; k <= g; ++k) units.push_back(fock::label_of_slot_unit(u, gen::complex_vector(rng, g)));
    const std::size_t index = fock::index_from_units(units);
    const std::size_t root_dim = seeds.roots.rank();
    t.require(root_dim == g - 1 && index == g - 1,
              "g=" + std::to_string(g) + ": root dim " + std::to_string(root_dim) + ", index " +
                  std::to_string(index));
    summary += (summary.empty() ? "" : ", ") + ("g=" + std::to_string(g) + ":" + std::to_string(root_dim) + "=" +
                                               std::to_string(index));
  }
  return finish(r, t, summary);
}

// u^{(x)(j-1)} (x) a (x) u^{(x)(n-j)} summed over j, built from Kronecker products.
ComplexVector brute_addit(const ComplexVector& u, const ComplexVector& a, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(std::pow(static_cast<double>(u.size()), static_cast<double>(n)));
  ComplexVector sum = ComplexVector::Zero(dim);
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector term = ComplexVector::Ones(1);
    for (std::size_t k = 0; k < n; ++k) term = linalg::kron(term, k == j ? a : u);
    sum += term;
  }
  return sum;
}

CriterionResult addit_structure(gen::Rng& rng) {
  CriterionResult r{3, "addit_hilbert_structure", false, 0.0, "", 0.0, 0.0};
  Tally t;
  double worst_inner = 0.0;
  double worst_orth = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = gen::uniform_int(rng, 2, 3);
    const auto n = gen::uniform_int(rng, 1, 6);
    const ComplexVector u = gen::unit_vector(rng, g);
    const ComplexVector a = gen::complex_vector(rng, g);
    const ComplexVector b = gen::complex_vector(rng, g);
    const Complex formula = lattice::addit_inner(u, a, b, n);
    const Complex brute = brute_addit(u, a, n).dot(brute_addit(u, b, n));
    const double d_inner = std::abs(formula - brute);
    t.defect(d_inner, 1e-10, "inner product trial " + std::to_string(trial));
    const auto split = lattice::addit_decompose(u, a);
    const ComplexVector trivial = split.trivial_coeff * u;
    const double d_orth = std::abs(brute_addit(u, trivial, n).dot(brute_addit(u, split.root_part, n)));
    t.defect(d_orth, 1e-12, "orthogonality trial " + std::to_string(trial));
    worst_inner = std::max(worst_inner, d_inner);
    worst_orth = std::max(worst_orth, d_orth);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "100 trials, inner %.1e, orthogonality %.1e", worst_inner, worst_orth);
  return finish(r, t, buf);
}

CriterionResult addit_lift(gen::Rng&) {
  CriterionResult r{4, "addit_lift", false, 0.0, "", 0.0, 1.0};
  Tally t;
  ComplexVector c(2);
  c << Complex(0.6, 0.0), Complex(0.0, 0.8);
  const auto slot = [&c](double step) {
    ComplexVector v(3);
    v << 1.0, std::sqrt(step) * c;
    return v;
  };
  lattice::NetSpec unit_net;
  unit_net.unit = [&slot](double step) -> std::optional<ComplexVector> { return slot(step); };
  unit_net.horizon = 1.0;
  unit_net.depth = 20;
  double previous = 0.0;
  for (const auto& row : lattice::composition_net_inner(unit_net)) {
    const long double parts = std::ldexp(1.0L, static_cast<int>(row.level));
    const long double oracle = std::pow(1.0L + 1.0L / parts, parts);
    const double got = row.unit_inner.real();
    t.defect(std::abs(got - static_cast<double>(oracle)) + std::abs(row.unit_inner.imag()), 1e-12,
             "unit net level " + std::to_string(row.level));
    t.require(row.level == 0 || got > previous, "unit net not increasing at level " + std::to_string(row.level));
    t.require(got < std::exp(1.0), "unit net exceeds e at level " + std::to_string(row.level));
    previous = got;
  }
  const double horizon = 1.5;
  lattice::NetSpec root_net;
  root_net.unit = [](double) -> std::optional<ComplexVector> { return basis_vector(3, 0); };
  root_net.addit = [&c](double step) -> std::optional<ComplexVector> {
    ComplexVector v(3);
    v << 0.0, std::sqrt(step) * c;
    return v;
  };
  root_net.horizon = horizon;
  root_net.depth = 20;
  for (const auto& row : lattice::composition_net_inner(root_net)) {
    t.defect(std::abs(*row.addit_norm2 - horizon * c.squaredNorm()), 1e-12,
             "root net level " + std::to_string(row.level));
    t.defect(std::abs(*row.unit_addit), 1e-12, "root net unit pairing level " + std::to_string(row.level));
  }
  return finish(r, t, "levels 0..20, unit net -> e, root net = T|c|^2");
}

CriterionResult amalgamation(gen::Rng& rng) {
  CriterionResult r{5, "amalgamation", false, 0.0, "", 0.0, 0.0};
  Tally t;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g1 = gen::uniform_int(rng, 1, 4);
    const auto g2 = gen::uniform_int(rng, 1, 4);
    const double scale = trial % 3 == 0 ? 1.0 : gen::uniform01(rng) * 0.999 + 0.001;
    const amalgam::SlotMorphism c(gen::contraction(rng, g1, g2, scale));
    const auto res = amalgam::amalgamate(g1, g2, c);
    const auto d = amalgam::check_invariants(res);
    const std::string where = "trial " + std::to_string(trial);
    t.defect(d.isometry1, 1e-10, where + " isometry J1");
    t.defect(d.isometry2, 1e-10, where + " isometry J2");
    t.defect(d.pairing, 1e-10, where + " pairing");
    t.defect(d.generation, 1e-10, where + " generation");
  }
  ComplexMatrix half(1, 1);
  half(0, 0) = 0.5;
  const auto res = amalgam::amalgamate(1, 1, amalgam::SlotMorphism(half));
  const ComplexVector one = ComplexVector::Ones(1);
  const std::size_t amalgam_roots =
      lattice::solve_addit_seeds(lattice::Subsystem::full(res.slot_dim), res.j2 * one).roots.rank();
  const std::size_t component_roots = lattice::solve_addit_seeds(lattice::Subsystem::full(1), one).roots.rank();
  t.require(res.slot_dim == 2 && amalgam_roots == 1 && component_roots == 0,
            "C=1/2 instance: slot dim " + std::to_string(res.slot_dim) + ", roots " +
                std::to_string(amalgam_roots) + " vs " + std::to_string(component_roots));
  return finish(r, t,
                "100 trials; C=1/2: slot dim " + std::to_string(res.slot_dim) + ", roots " +
                    std::to_string(amalgam_roots) + " vs 0+0");
}

CriterionResult root_additivity(gen::Rng& rng) {
  CriterionResult r{6, "root_additivity", false, 0.0, "", 0.0, 0.0};
  Tally t;
  for (std::size_t d1 = 0; d1 <= 3; ++d1) {
    for (std::size_t d2 = 0; d2 <= 3; ++d2) {
      const ComplexVector u1 = gen::unit_vector(rng, d1 + 1);
      const ComplexVector u2 = gen::unit_vector(rng, d2 + 1);
      const std::size_t g = (d1 + 1) * (d2 + 1);
      std::size_t depth = 1;
      while (depth < 4 && kernels::ipow(g, depth + 1) <= lattice::kMaxFiberDim) ++depth;
      const auto sub = amalgam::spatial_product_in_tensor(u1, u2, depth);
      const Subspace solver = lattice::solve_addit_seeds(sub, linalg::kron(u1, u2)).roots;
      const Subspace r1 = linalg::complement(Subspace::line(u1));
      const Subspace r2 = linalg::complement(Subspace::line(u2));
      const Subspace formula = linalg::join(linalg::tensor(r1, Subspace::line(u2)), linalg::tensor(Subspace::line(u1), r2));
      const std::string where = "d1=" + std::to_string(d1) + ",d2=" + std::to_string(d2);
      t.require(solver.rank() == d1 + d2, where + ": solver root dim " + std::to_string(solver.rank()));
      t.defect(linalg::projector_distance(solver, formula), 1e-8, where);
    }
  }
  return finish(r, t, "d1,d2 in 0..3");
}

CriterionResult spatial_refinement(gen::Rng&) {
  CriterionResult r{7, "spatial_tensor_refinement", false, 0.0, "", 0.0, 2.0};
  Tally t;
  ComplexVector c(2);
  c << Complex(0.6, 0.0), Complex(0.0, 0.8);
  ComplexVector d(1);
  d << Complex(0.0, 1.0);
  double previous = 1.0;
  double last = 0.0;
  for (std::size_t n = 1; n <= 64; ++n) {
    const double got = amalgam::spatial_tensor_defect(c, d, 1.0, n);
    const long double delta = 1.0L / static_cast<long double>(n);
    const long double slot = delta * delta / ((1.0L + delta) * (1.0L + delta));
    const long double oracle = -std::expm1(static_cast<long double>(n) * std::log1p(-slot));
    t.defect(std::abs(got - static_cast<double>(oracle)), 1e-12, "n=" + std::to_string(n));
    t.require(n == 1 || got < previous, "not decreasing at n=" + std::to_string(n));
    previous = got;
    last = got;
  }
  t.require(last < 0.02, "defect(64) = " + std::to_string(last));
  char buf[64];
  std::snprintf(buf, sizeof buf, "defect(64)=%.6f", last);
  return finish(r, t, buf);
}

CriterionResult cluster_structure(gen::Rng& rng) {
  CriterionResult r{8, "cluster_structure", false, 0.0, "", 0.0, 0.0};
  Tally t;
  constexpr std::size_t depth = 6;
  for (std::size_t g = 2; g <= 3; ++g) {
    const ComplexVector u = gen::unit_vector(rng, g);
    const auto f = lattice::Subsystem::unit_line(u, depth);
    const auto report = cluster::cluster_report(f, depth);
    const std::string tag = "g=" + std::to_string(g) + " ";
    for (const auto& check : report.checks) t.defect(check.max_defect, linalg::kContainTol, tag + check.name);
    for (std::size_t n = 1; n <= depth; ++n) {
      t.require(report.inclusion_dims[n - 1] == 1 + n * (g - 1),
                tag + "level " + std::to_string(n) + " has dim " + std::to_string(report.inclusion_dims[n - 1]));
    }
    const auto generated = lattice::generate_with_report(report.inclusion);
    t.require(generated.system.level1().is_full(), tag + "generated cluster is not the full system");
    t.defect(generated.route_defect, linalg::kSubspaceEqualTol, tag + "generation route");
    const auto xs = cluster::x_spaces(u, depth);
    for (std::size_t m = 1; m < depth; ++m) {
      for (std::size_t n = 1; m + n <= depth; ++n) {
        const auto x = cluster::x_decomposition_check(xs, u, m, n);
        t.defect(x.max_defect, linalg::kSubspaceEqualTol, tag + x.name + " " + x.detail);
      }
      const auto s = cluster::shift_orthogonality_check(xs, u, m);
      t.defect(s.max_defect, 1e-12, tag + s.name + " m=" + std::to_string(m));
    }
  }
  return finish(r, t, "g=2,3 levels<=6, dims 1+n(g-1), cluster = full");
}

CriterionResult derivative_correspondence(gen::Rng& rng) {
  CriterionResult r{9, "derivative_correspondence", false, 0.0, "", 0.0, 10.0};
  Tally t;
  std::vector<lattice::Subsystem> inputs{
      lattice::Subsystem::unit_line(basis_vector(2, 0)),
      lattice::Subsystem::unit_line(basis_vector(3, 0)),
      lattice::Subsystem(linalg::join(Subspace::line(basis_vector(3, 0)), Subspace::line(basis_vector(3, 1))),
                         lattice::kDefaultDepth),
  };
  int runs = 0;
  for (const auto& f : inputs) {
    for (std::size_t cells = 1; cells <= 5; ++cells) {
      const std::size_t dim = kernels::ipow(f.slot_dim(), cells);
      const std::vector<random_sets::StateDensity> states{
          random_sets::StateDensity::tracial(dim),
          random_sets::StateDensity::geometric_diagonal(dim),
          random_sets::StateDensity::random_faithful_diagonal(dim, rng),
      };
      for (std::size_t k = 0; k < states.size(); ++k) {
        const auto report = random_sets::verify_derivative_correspondence(f, states[k], cells);
        const std::string where = "g=" + std::to_string(f.slot_dim()) + " rank=" +
                                  std::to_string(f.level1().rank()) + " cells=" + std::to_string(cells) +
                                  " state " + std::to_string(k) + " ";
        for (const auto& check : report.checks) {
          t.defect(check.max_defect, 1e-10, where + check.name + " (" + check.detail + ")");
          t.require(check.pass, where + check.name + " failed: " + check.detail);
        }
        t.require(report.measure.dist.exact() && report.cluster_measure.dist.exact(),
                  where + "probabilities are not exact");
        ++runs;
      }
    }
  }
  return finish(r, t, std::to_string(runs) + " runs, 3 faithful states, exact laws");
}

CriterionResult hyperspace_exactness(gen::Rng& rng) {
  CriterionResult r{10, "hyperspace_exactness", false, 0.0, "", 0.0, 0.0};
  Tally t;
  using hyperspace::ClosedSet;
  for (int trial = 0; trial < 500; ++trial) {
    const ClosedSet a = gen::closed_set(rng, 32, 3);
    const ClosedSet b = gen::closed_set(rng, 32, 3);
    const ClosedSet c = gen::closed_set(rng, 32, 3);
    const Rational ab = hyperspace::hausdorff(a, b);
    const std::string where = "triple " + std::to_string(trial);
    t.require(ab == hyperspace::hausdorff(b, a), where + ": asymmetric");
    t.require(hyperspace::hausdorff(a, a) == 0, where + ": d(a,a) != 0");
    t.require((ab == 0) == (a == b), where + ": indiscernibles");
    t.require(hyperspace::hausdorff(a, c) <= ab + hyperspace::hausdorff(b, c), where + ": triangle");
    const ClosedSet da = hyperspace::cb_derivative(a);
    const ClosedSet w = hyperspace::set_union(a, b);
    t.require(hyperspace::cb_derivative(da) == da, where + ": derivative not idempotent");
    t.require(hyperspace::is_subset(da, a), where + ": derivative not inside the set");
    t.require(hyperspace::is_subset(da, hyperspace::cb_derivative(w)), where + ": derivative not monotone");
  }
  for (int trial = 0; trial < 200; ++trial) {
    const ClosedSet z = gen::closed_set(rng, 32, 3);
    const ClosedSet f = gen::closed_set_with_interior(rng, 32, 3);
    t.require(hyperspace::boundary_lemma_check(z, f),
              "boundary lemma fails for z='" + z.to_text() + "', f='" + f.to_text() + "'");
  }
  t.require(hyperspace::hausdorff(ClosedSet(), ClosedSet::point(0)) == 1, "d(empty,{0}) != 1");
  return finish(r, t, "500 triples, 200 boundary pairs, exact");
}

using Runner = std::function<CriterionResult(gen::Rng&)>;

const std::vector<Runner>& runners() {
  static const std::vector<Runner> all{euler_limit,     root_index,         addit_structure,
                                       addit_lift,      amalgamation,       root_additivity,
                                       spatial_refinement, cluster_structure, derivative_correspondence,
                                       hyperspace_exactness};
  return all;
}

const char* const kNames[kCriterionCount] = {
    "euler_limit",      "root_index_match",        "addit_hilbert_structure", "addit_lift",
    "amalgamation",     "root_additivity",         "spatial_tensor_refinement", "cluster_structure",
    "derivative_correspondence", "hyperspace_exactness"};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriterionCount) throw RangeError("criterion id outside 1.." + std::to_string(kCriterionCount));
  // Each criterion gets its own stream so that results do not depend on which
  // other criteria ran.
  gen::Rng rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(id)));
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = runners()[static_cast<std::size_t>(id - 1)](rng);
  } catch (const std::exception& e) {
    r = {id, kNames[id - 1], false, 0.0, std::string("exception: ") + e.what(), 0.0, 0.0};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.pass && r.time_limit > 0.0 && r.seconds >= r.time_limit) {
    r.pass = false;
    r.detail += "; exceeded time limit " + std::to_string(r.time_limit) + " s";
  }
  return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "%s  [%2d] %-26s max_defect=%.3e  t=%.3fs  ", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.max_defect, r.seconds);
  return head + r.detail;
}

}  // namespace prodsys::selftest
