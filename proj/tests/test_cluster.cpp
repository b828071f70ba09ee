#include "doctest.h"

#include "prodsys/cluster.hpp"
#include "prodsys/errors.hpp"
#include "support.hpp"

using namespace prodsys;
using namespace prodsys::cluster;
using linalg::ComplexMatrix;
using linalg::Subspace;

namespace {

// F^-_n by the defining join, using only subspace arithmetic.
Subspace ominus_oracle(const std::vector<Subspace>& f1, const std::vector<Subspace>& f2, std::size_t g,
                       std::size_t n) {
  std::size_t ambient = 1;
  for (std::size_t i = 0; i < n; ++i) ambient *= g;
  Subspace acc = Subspace::zero(ambient);
  for (std::size_t r = 1; r < n; ++r) {
    acc = linalg::join(acc, linalg::tensor(linalg::complement(f1[r - 1]), linalg::complement(f2[n - r - 1])));
  }
  return acc;
}

std::vector<Subspace> levels_of(const lattice::Subsystem& f) {
  std::vector<Subspace> out;
  for (std::size_t n = 1; n <= f.depth(); ++n) out.push_back(f.level(n));
  return out;
}

lattice::Subsystem two_dim_subsystem(test::Rng& rng, const ComplexVector& u, std::size_t depth) {
  ComplexMatrix cols(u.size(), 2);
  cols << u, gen::complex_vector(rng, static_cast<std::size_t>(u.size()));
  return lattice::Subsystem(linalg::orthonormalize(cols), depth);
}

}  // namespace

TEST_CASE("ominus_levels examples") {
  auto rng = test::rng_for(61);
  const auto u = gen::unit_vector(rng, 2);
  const auto om = ominus_levels(lattice::Subsystem::unit_line(u, 4), 4);
  REQUIRE(om.size() == 4);
  CHECK(om[0].rank() == 0);
  CHECK(om[1].rank() == 1);
  const auto perp = linalg::complement(Subspace::line(u));
  CHECK(linalg::projector_distance(om[1], linalg::tensor(perp, perp)) < 1e-8);

  for (const auto& level : ominus_levels(lattice::Subsystem::full(3, 3), 3)) CHECK(level.rank() == 0);
}

TEST_CASE("property: ominus levels match the defining join") {
  auto rng = test::rng_for(62);
  for (std::size_t g = 2; g <= 3; ++g) {
    const auto u = gen::unit_vector(rng, g);
    for (const auto& f : {lattice::Subsystem::unit_line(u, 4), two_dim_subsystem(rng, u, 4)}) {
      const auto om = ominus_levels(f, 4);
      const auto lv = levels_of(f);
      for (std::size_t n = 1; n <= 4; ++n) {
        CHECK(linalg::projector_distance(om[n - 1], ominus_oracle(lv, lv, g, n)) < 1e-8);
      }
    }
  }
}

TEST_CASE("cluster_inclusion examples") {
  auto rng = test::rng_for(63);
  const auto u2 = gen::unit_vector(rng, 2);
  const auto inc2 = cluster_inclusion(lattice::Subsystem::unit_line(u2, 4), 4);
  CHECK(inc2.level(2).rank() == 3);

  for (std::size_t g = 2; g <= 4; ++g) {
    const auto u = gen::unit_vector(rng, g);
    const std::size_t depth = g == 4 ? 4 : 5;
    const auto inc = cluster_inclusion(lattice::Subsystem::unit_line(u, depth), depth);
    for (std::size_t n = 1; n <= depth; ++n) CHECK(inc.level(n).rank() == 1 + n * (g - 1));
    CHECK(inc.is_compatible());
  }

  const auto full = cluster_inclusion(lattice::Subsystem::full(3, 3), 3);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(full.level(n).is_full());
}

TEST_CASE("cluster_system of a unit line is the full system") {
  auto rng = test::rng_for(64);
  for (std::size_t g = 2; g <= 3; ++g) {
    const auto u = gen::unit_vector(rng, g);
    const auto sys = cluster_system(lattice::Subsystem::unit_line(u, 4), 4);
    for (std::size_t n = 1; n <= 4; ++n) CHECK(sys.level(n).is_full());
  }
  const auto full = cluster_system(lattice::Subsystem::full(2, 4), 4);
  for (std::size_t n = 1; n <= 4; ++n) CHECK(full.level(n).is_full());
}

TEST_CASE("cluster of an intermediate subsystem") {
  auto rng = test::rng_for(65);
  const auto u = gen::unit_vector(rng, 3);
  const auto f = two_dim_subsystem(rng, u, 4);
  const auto report = cluster_report(f, 4);
  CHECK(all_pass(report.checks));
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(linalg::contains(report.inclusion.level(n), f.level(n)));
    CHECK(report.inclusion_dims[n - 1] == report.inclusion.level(n).rank());
    CHECK(report.ominus_dims[n - 1] + report.inclusion_dims[n - 1] == f.level(n).ambient_dim());
  }
  const auto sys = cluster_system(f, 4);
  CHECK(linalg::contains(sys.level1(), f.level1()));
}

TEST_CASE("property: containment chain and monotonicity") {
  auto rng = test::rng_for(66);
  for (int trial = 0; trial < 4; ++trial) {
    const auto u = gen::unit_vector(rng, 3);
    const auto small = lattice::Subsystem::unit_line(u, 4);
    const auto large = two_dim_subsystem(rng, u, 4);
    const auto inc_small = cluster_inclusion(small, 4);
    const auto inc_large = cluster_inclusion(large, 4);
    const auto sys_small = cluster_system(small, 4);
    for (std::size_t n = 1; n <= 4; ++n) {
      CHECK(linalg::contains(inc_small.level(n), small.level(n)));
      CHECK(linalg::contains(sys_small.level(n), inc_small.level(n)));
      CHECK(linalg::contains(inc_large.level(n), inc_small.level(n)));
    }
  }
}

TEST_CASE("property: roots of the full system lie in the cluster inclusion levels") {
  auto rng = test::rng_for(67);
  for (std::size_t g = 2; g <= 3; ++g) {
    const auto u = gen::unit_vector(rng, g);
    const auto roots = lattice::solve_addit_seeds(lattice::Subsystem::full(g, 4), u).roots;
    const auto inc = cluster_inclusion(lattice::Subsystem::unit_line(u, 4), 4);
    for (std::size_t n = 1; n <= 4; ++n) {
      for (Eigen::Index j = 0; j < roots.basis().cols(); ++j) {
        const ComplexVector a = lattice::addit_section(u, roots.basis().col(j), n);
        CHECK(linalg::containment_defect(inc.level(n), linalg::orthonormalize(a)) < 1e-8);
      }
    }
  }
}

TEST_CASE("pair_cluster examples") {
  auto rng = test::rng_for(68);
  const auto u = gen::unit_vector(rng, 3);
  const auto f = two_dim_subsystem(rng, u, 3);
  const auto fi = lattice::InclusionSystem::from_subsystem(f);
  const auto same = pair_cluster(fi, fi, 3);
  const auto single = cluster_inclusion(f, 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    CHECK(linalg::projector_distance(same.level(n), single.level(n)) < 1e-8);
  }

  const auto full = lattice::InclusionSystem::from_subsystem(lattice::Subsystem::full(3, 3));
  const auto line = lattice::InclusionSystem::from_subsystem(lattice::Subsystem::unit_line(u, 3));
  const auto mixed = pair_cluster(full, line, 3);
  for (std::size_t n = 1; n <= 3; ++n) CHECK(mixed.level(n).is_full());

  const auto u2 = gen::unit_vector(rng, 3);
  const auto line2 = lattice::InclusionSystem::from_subsystem(lattice::Subsystem::unit_line(u2, 3));
  const auto pc = pair_cluster(line, line2, 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto oracle = linalg::complement(ominus_oracle(line.levels(), line2.levels(), 3, n));
    CHECK(pc.level(n).rank() == oracle.rank());
    CHECK(linalg::projector_distance(pc.level(n), oracle) < 1e-8);
  }

  const auto other_slot = lattice::InclusionSystem::from_subsystem(lattice::Subsystem::full(2, 3));
  CHECK_THROWS_AS(pair_cluster(line, other_slot, 3), DimensionError);
  const auto e0 = Subspace::line(test::basis_vector(2, 0));
  const lattice::InclusionSystem bad(2, {e0, Subspace::line(test::basis_vector(4, 3))});
  CHECK_THROWS_AS(pair_cluster(bad, other_slot, 2), InvalidInclusionSystem);
}

TEST_CASE("x spaces") {
  auto rng = test::rng_for(69);
  const auto u = gen::unit_vector(rng, 2);
  const auto xs = x_spaces(u, 6);
  for (std::size_t n = 1; n <= 6; ++n) CHECK(xs[n - 1].rank() == n);
  CHECK(linalg::projector_distance(xs[0], linalg::complement(Subspace::line(u))) < 1e-10);
  CHECK(linalg::projector_distance(x_space(u, 3), xs[2]) < 1e-8);
  for (std::size_t m = 1; m < 6; ++m) {
    for (std::size_t n = 1; m + n <= 6; ++n) {
      const auto r = x_decomposition_check(xs, u, m, n);
      CHECK_MESSAGE(r.pass, r.name << " " << r.detail << " " << r.max_defect);
    }
  }

  const auto u3 = gen::unit_vector(rng, 3);
  const auto xs3 = x_spaces(u3, 5);
  for (std::size_t n = 1; n <= 5; ++n) CHECK(xs3[n - 1].rank() == 2 * n);
  for (std::size_t m = 1; m < 5; ++m) {
    for (std::size_t n = 1; m + n <= 5; ++n) CHECK(x_decomposition_check(xs3, u3, m, n).pass);
  }
}

TEST_CASE("shift orthogonality") {
  auto rng = test::rng_for(70);
  const auto u = gen::unit_vector(rng, 2);
  const auto r = shift_orthogonality_check(u, 1, 4);
  CHECK(r.pass);
  CHECK(r.max_defect < 1e-12);
  const auto xs = x_spaces(u, 5);
  for (std::size_t m = 1; m < 5; ++m) CHECK(shift_orthogonality_check(xs, u, m).pass);
}

TEST_CASE("shift embeddings compose") {
  // Padding by u^m then u^m' is padding by u^(m+m').
  auto rng = test::rng_for(71);
  const auto u = gen::unit_vector(rng, 2);
  const auto xs = x_spaces(u, 2);
  const ComplexVector x = xs[1].basis() * gen::complex_vector(rng, xs[1].rank());
  const ComplexVector twice = linalg::kron(lattice::unit_section(u, 1), linalg::kron(lattice::unit_section(u, 2), x));
  const ComplexVector once = linalg::kron(lattice::unit_section(u, 3), x);
  CHECK(test::max_abs(twice - once) < 1e-15);
}
