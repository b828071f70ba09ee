#include "doctest.h"

#include <cmath>

#include "prodsys/errors.hpp"
#include "prodsys/lattice.hpp"
#include "support.hpp"

using namespace prodsys;
using namespace prodsys::lattice;
using linalg::Complex;
using test::basis_vector;

namespace {

ComplexVector vec2(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  return v;
}

// Brute-force addit: explicit Kronecker sum of the n single-slot insertions.
ComplexVector addit_oracle(const ComplexVector& u, const ComplexVector& a1, std::size_t n) {
  ComplexVector sum;
  for (std::size_t j = 0; j < n; ++j) {
    ComplexVector term = ComplexVector::Ones(1);
    for (std::size_t i = 0; i < n; ++i) term = linalg::kron(term, i == j ? a1 : u);
    sum = j == 0 ? term : ComplexVector(sum + term);
  }
  return sum;
}

}  // namespace

TEST_CASE("unit_section examples") {
  const auto e000 = unit_section(basis_vector(2, 0), 3);
  CHECK(test::max_abs(e000 - basis_vector(8, 0)) == 0.0);
  const auto half = unit_section(vec2(1.0, 1.0) / std::sqrt(2.0), 2);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(half(i) - 0.5) < 1e-15);
  CHECK_THROWS_AS(unit_section(ComplexVector::Zero(2), 2), InvalidUnit);
  CHECK(unit_section(basis_vector(3, 1), 0).size() == 1);
}

TEST_CASE("addit_section examples") {
  const auto u = basis_vector(2, 0);
  const auto a1 = vec2(0.0, 1.0);
  CHECK(test::max_abs(addit_section(u, a1, 1) - a1) == 0.0);
  const auto a2 = addit_section(u, a1, 2);
  CHECK(test::max_abs(a2 - (basis_vector(4, 1) + basis_vector(4, 2))) < 1e-15);
  CHECK(a2.squaredNorm() == doctest::Approx(2.0));
  CHECK(addit_section(u, vec2(1.0, 1.0), 3).squaredNorm() == doctest::Approx(12.0));
}

TEST_CASE("addit_decompose examples") {
  const auto u = basis_vector(2, 0);
  const auto d1 = addit_decompose(u, u);
  CHECK(d1.trivial_coeff == Complex(1.0));
  CHECK(d1.root_part.norm() == 0.0);
  const auto d2 = addit_decompose(u, vec2(0.0, 5.0));
  CHECK(d2.trivial_coeff == Complex(0.0));
  CHECK(test::max_abs(d2.root_part - vec2(0.0, 5.0)) == 0.0);
  const auto d3 = addit_decompose(u, vec2(2.0, Complex(0.0, 3.0)));
  CHECK(d3.trivial_coeff == Complex(2.0));
  CHECK(test::max_abs(d3.root_part - vec2(0.0, Complex(0.0, 3.0))) == 0.0);
}

TEST_CASE("addit_inner examples") {
  const auto u = basis_vector(2, 0);
  CHECK(std::abs(addit_inner(u, u, u, 4) - Complex(16.0)) < 1e-12);
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(std::abs(addit_inner(u, vec2(0.0, 1.0), u, n)) < 1e-15);
  }
  const auto a = vec2(1.0, 1.0);
  const auto brute = addit_oracle(u, a, 3).dot(addit_oracle(u, a, 3));
  CHECK(std::abs(addit_inner(u, a, a, 3) - brute) < 1e-12);
  CHECK(std::abs(brute - Complex(12.0)) < 1e-12);
}

TEST_CASE("property: addit inner product from seeds matches tensors") {
  auto rng = test::rng_for(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t g = gen::uniform_int(rng, 2, 3);
    const std::size_t n = gen::uniform_int(rng, 1, 5);
    const auto u = gen::unit_vector(rng, g);
    const auto a = gen::complex_vector(rng, g);
    const auto b = gen::complex_vector(rng, g);
    const ComplexVector an = addit_section(u, a, n);
    CHECK(test::max_abs(an - addit_oracle(u, a, n)) < 1e-12);
    CHECK(std::abs(addit_inner(u, a, b, n) - an.dot(addit_section(u, b, n))) < 1e-10);
  }
}

TEST_CASE("solve_addit_seeds examples") {
  auto rng = test::rng_for(32);
  for (std::size_t g = 2; g <= 4; ++g) {
    const auto u = gen::unit_vector(rng, g);
    const auto full = solve_addit_seeds(Subsystem::full(g, 5), u);
    CHECK(full.seeds.rank() == g);
    CHECK(full.roots.rank() == g - 1);
    CHECK(linalg::projector_distance(full.roots, linalg::complement(linalg::Subspace::line(u))) < 1e-8);

    const auto line = solve_addit_seeds(Subsystem::unit_line(u, 5), u);
    CHECK(line.seeds.rank() == 1);
    CHECK(line.roots.rank() == 0);

    const auto other = gen::unit_vector(rng, g);
    CHECK_THROWS_AS(solve_addit_seeds(Subsystem::unit_line(u, 3), other), InvalidUnit);
  }
}

TEST_CASE("intermediate subsystem: roots are the level-1 part orthogonal to u") {
  auto rng = test::rng_for(33);
  const auto u = gen::unit_vector(rng, 3);
  ComplexMatrix cols(3, 2);
  cols << u, gen::complex_vector(rng, 3);
  const Subsystem f(linalg::orthonormalize(cols), 4);
  const auto seeds = solve_addit_seeds(f, u);
  CHECK(seeds.seeds.rank() == 2);
  CHECK(seeds.roots.rank() == 1);
  CHECK(linalg::contains(f.level1(), seeds.roots));
}

TEST_CASE("subsystem levels and projection") {
  auto rng = test::rng_for(34);
  const auto l1 = test::random_subspace(rng, 3, 2);
  const Subsystem f(l1, 4);
  CHECK(f.level(3).rank() == 8);
  CHECK(f.product_defect() < 1e-10);
  const auto v = gen::complex_vector(rng, 27);
  CHECK(test::max_abs(f.project(3, v) - linalg::projector(f.level(3)) * v) < 1e-12);
  CHECK_THROWS_AS(f.level(0), RangeError);
  CHECK_THROWS_AS(f.level(5), RangeError);
  CHECK_THROWS_AS(Subsystem::full(2, 13).level(13), CapacityError);
  CHECK_THROWS_AS(ProductSystem(ComplexVector::Ones(2)), InvalidUnit);
}

TEST_CASE("fock inclusion system") {
  auto rng = test::rng_for(35);
  for (std::size_t g = 2; g <= 3; ++g) {
    const auto u = gen::unit_vector(rng, g);
    const auto inc = fock_inclusion(u, 5);
    CHECK(inc.is_compatible());
    for (std::size_t n = 1; n <= 5; ++n) CHECK(inc.level(n).rank() == 1 + n * (g - 1));
    const auto report = generate_with_report(inc);
    CHECK(report.route_defect < 1e-8);
    for (std::size_t n = 1; n <= 5; ++n) CHECK(report.system.level(n).is_full());
  }
}

TEST_CASE("generate_product_system leaves a product system unchanged") {
  auto rng = test::rng_for(36);
  const Subsystem f(test::random_subspace(rng, 3, 2), 4);
  const auto gen_f = generate_product_system(InclusionSystem::from_subsystem(f));
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(linalg::projector_distance(gen_f.level(n), f.level(n)) < 1e-8);
  }
}

TEST_CASE("generate rejects incompatible inclusion systems") {
  // Level 2 spanned by e1 (x) e1 but level 1 is only C e0.
  const auto e0 = linalg::Subspace::line(basis_vector(2, 0));
  const auto bad = linalg::Subspace::line(basis_vector(4, 3));
  const InclusionSystem inc(2, {e0, bad});
  CHECK_FALSE(inc.is_compatible());
  CHECK_THROWS_AS(generate_product_system(inc), InvalidInclusionSystem);
  CHECK_THROWS_AS(InclusionSystem(2, {linalg::Subspace::full(3)}), DimensionError);
}

TEST_CASE("flip_unitary examples") {
  for (std::size_t n = 1; n <= 3; ++n) {
    CHECK(test::max_abs(flip_unitary(2, n, 0) - test::identity(1u << n)) == 0.0);
    CHECK(test::max_abs(flip_unitary(2, n, n) - test::identity(1u << n)) == 0.0);
  }
  auto rng = test::rng_for(37);
  const auto x = gen::complex_vector(rng, 3);
  const auto y = gen::complex_vector(rng, 3);
  CHECK(test::max_abs(flip_unitary(3, 2, 1) * linalg::kron(x, y) - linalg::kron(y, x)) < 1e-15);
  CHECK_THROWS_AS(flip_unitary(2, 2, 3), RangeError);
}

TEST_CASE("property: flips exchange tensor blocks and compose additively") {
  auto rng = test::rng_for(38);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t g = gen::uniform_int(rng, 2, 3);
    const std::size_t n = gen::uniform_int(rng, 1, 4);
    const std::size_t k = gen::uniform_int(rng, 0, n);
    const auto a = gen::complex_vector(rng, static_cast<std::size_t>(std::pow(g, n - k)));
    const auto b = gen::complex_vector(rng, static_cast<std::size_t>(std::pow(g, k)));
    const ComplexMatrix f = flip_unitary(g, n, k);
    CHECK(test::max_abs(f * linalg::kron(a, b) - linalg::kron(b, a)) < 1e-14);
    CHECK(test::max_abs(f.adjoint() * f - test::identity(static_cast<std::size_t>(f.rows()))) == 0.0);
    if (k + 1 <= n) {
      // Rotating by one slot k times equals rotating by k.
      ComplexMatrix step = test::identity(static_cast<std::size_t>(f.rows()));
      for (std::size_t i = 0; i < k; ++i) step = flip_unitary(g, n, 1) * step;
      CHECK(test::max_abs(step - f) == 0.0);
    }
  }
}

TEST_CASE("compositions") {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto all = compositions(n);
    CHECK(all.size() == (std::size_t{1} << (n - 1)));
    for (const auto& c : all) {
      std::size_t sum = 0;
      for (auto p : c.parts) sum += p;
      CHECK(sum == n);
      CHECK(c.total == n);
    }
  }
  CHECK_THROWS_AS(Composition::make({1, 0, 2}), InvalidInput);
}

TEST_CASE("composition net for the Fock inclusion unit") {
  NetSpec spec;
  spec.unit = [](double t) -> std::optional<ComplexVector> { return vec2(1.0, std::sqrt(t)); };
  spec.horizon = 1.0;
  spec.depth = 12;
  const auto rows = composition_net_inner(spec);
  REQUIRE(rows.size() == 13);
  double previous = 0.0;
  for (const auto& row : rows) {
    const double parts = std::ldexp(1.0, static_cast<int>(row.level));
    CHECK(row.unit_inner.real() == doctest::Approx(std::pow(1.0 + 1.0 / parts, parts)).epsilon(1e-12));
    CHECK(row.unit_inner.real() > previous);
    CHECK(row.unit_inner.real() < std::exp(1.0));
    previous = row.unit_inner.real();
  }
  CHECK(std::exp(1.0) - rows.back().unit_inner.real() < 1e-3);
}

TEST_CASE("composition net errors") {
  NetSpec spec;
  spec.unit = [](double t) -> std::optional<ComplexVector> {
    if (t < 0.1) return std::nullopt;
    return vec2(1.0, 0.0);
  };
  spec.depth = 5;
  CHECK_THROWS_AS(composition_net_inner(spec), EvaluationError);
  spec.depth = 31;
  CHECK_THROWS_AS(composition_net_inner(spec), RangeError);
  spec.depth = 2;
  spec.horizon = 0.0;
  CHECK_THROWS_AS(composition_net_inner(spec), RangeError);
}
