#include "doctest.h"

#include "prodsys/errors.hpp"
#include "prodsys/hyperspace.hpp"
#include "support.hpp"

using namespace prodsys;
using namespace prodsys::hyperspace;

namespace {

Rational q(long long p, long long d) { return Rational(p, d); }

ClosedSet set(std::string_view text) { return ClosedSet::parse(text); }

// Below the spacing 1/(64*64) of distinct rationals with denominator <= 64.
const Rational kProbe(1, 8192);

bool near_point_in(const ClosedSet& z, const Rational& x, int side) {
  const Rational y = x + kProbe * side;
  return y >= 0 && y <= 1 && z.contains(y);
}

// dist(x, z) straight from the definition over the interval list.
Rational dist_oracle(const Rational& x, const ClosedSet& z) {
  Rational best = 2;
  for (const auto& iv : z.intervals()) {
    Rational d = 0;
    if (x < iv.lo) d = iv.lo - x;
    if (x > iv.hi) d = x - iv.hi;
    best = std::min(best, d);
  }
  return best;
}

// sup over a 1/1680 grid restricted to a; exact for denominators dividing 840.
Rational hausdorff_grid_oracle(const ClosedSet& a, const ClosedSet& b) {
  if (a.empty() && b.empty()) return 0;
  if (a.empty() || b.empty()) return 1;
  Rational best = 0;
  for (int i = 0; i <= 1680; ++i) {
    const Rational x(i, 1680);
    if (a.contains(x)) best = std::max(best, dist_oracle(x, b));
    if (b.contains(x)) best = std::max(best, dist_oracle(x, a));
  }
  return best;
}

}  // namespace

TEST_CASE("normalize examples") {
  CHECK(ClosedSet::normalize({{0, q(1, 2)}, {q(1, 2), 1}}) == set("0..1"));
  CHECK(ClosedSet::normalize({}).empty());
  const auto merged = ClosedSet::normalize({{q(1, 4), q(1, 2)}, {q(3, 8), q(3, 4)}, {q(7, 8), q(7, 8)}});
  REQUIRE(merged.intervals().size() == 2);
  CHECK(merged.intervals()[0] == Interval{q(1, 4), q(3, 4)});
  CHECK(merged.intervals()[1] == Interval{q(7, 8), q(7, 8)});
  CHECK_THROWS_AS(ClosedSet::normalize({{q(-1, 2), q(1, 2)}}), RangeError);
  CHECK_THROWS_AS(ClosedSet::normalize({{q(1, 2), q(1, 4)}}), RangeError);
  CHECK_THROWS_AS(make_interval(0, q(3, 2)), RangeError);
}

TEST_CASE("text round trip") {
  CHECK(ClosedSet().to_text() == "");
  CHECK(set("").empty());
  CHECK(set("1/2").to_text() == "1/2..1/2");
  CHECK(set("1/4..1/2; 7/8").to_text() == "1/4..1/2; 7/8..7/8");
  CHECK(set("1/2..3/4; 0..1/4").to_text() == "0/1..1/4; 1/2..3/4");
  CHECK_THROWS_AS(set("1/4..;"), InvalidInput);
  CHECK_THROWS_AS(set("2"), RangeError);

  auto rng = test::rng_for(81);
  for (int trial = 0; trial < 200; ++trial) {
    const auto z = gen::closed_set(rng, 32, 4);
    CHECK(set(z.to_text()) == z);
    CHECK(ClosedSet::normalize(z.intervals()) == z);
  }
}

TEST_CASE("hausdorff examples") {
  CHECK(hausdorff(ClosedSet(), ClosedSet::point(0)) == 1);
  CHECK(hausdorff(ClosedSet::point(0), ClosedSet()) == 1);
  CHECK(hausdorff(ClosedSet(), ClosedSet()) == 0);
  const auto z = set("1/8..1/4; 2/3");
  CHECK(hausdorff(z, z) == 0);
  CHECK(hausdorff(ClosedSet::point(0), ClosedSet::point(q(3, 4))) == q(3, 4));
  CHECK(hausdorff(set("0..1/2"), set("1/2..1")) == q(1, 2));
  // The farthest point of [0,1] from {0, 1} is the gap midpoint.
  CHECK(hausdorff(set("0..1"), ClosedSet::points({0, 1})) == q(1, 2));
}

TEST_CASE("property: hausdorff matches a grid oracle") {
  auto rng = test::rng_for(82);
  for (int trial = 0; trial < 150; ++trial) {
    const auto a = gen::closed_set(rng, 8, 3);
    const auto b = gen::closed_set(rng, 8, 3);
    CHECK(hausdorff(a, b) == hausdorff_grid_oracle(a, b));
  }
}

TEST_CASE("property: hausdorff metric axioms, exactly") {
  auto rng = test::rng_for(83);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = gen::closed_set(rng, 32, 4);
    const auto b = gen::closed_set(rng, 32, 4);
    const auto c = gen::closed_set(rng, 32, 4);
    CHECK(hausdorff(a, b) == hausdorff(b, a));
    CHECK((hausdorff(a, b) == 0) == (a == b));
    CHECK(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c));
    CHECK(hausdorff(a, b) >= 0);
  }
}

TEST_CASE("distance and directed distance") {
  CHECK(distance(q(1, 2), set("0..1/4; 7/8")) == q(1, 4));
  CHECK(distance(q(1, 8), set("0..1/4")) == 0);
  CHECK_THROWS_AS(distance(q(1, 2), ClosedSet()), InvalidInput);
  CHECK(directed_hausdorff(set("1/2"), set("0..1")) == 0);
  CHECK(directed_hausdorff(set("0..1"), set("1/2")) == q(1, 2));
  CHECK_THROWS_AS(directed_hausdorff(ClosedSet(), set("1/2")), InvalidInput);
}

TEST_CASE("hits and misses examples") {
  auto rng = test::rng_for(84);
  for (int trial = 0; trial < 50; ++trial) {
    Rational a = gen::unit_rational(rng, 16), b = gen::unit_rational(rng, 16);
    if (b < a) std::swap(a, b);
    const auto iv = make_interval(a, b);
    CHECK(misses(ClosedSet(), iv));
    CHECK(hits(set("0..1"), iv));
    const auto z = gen::closed_set(rng, 16, 3);
    CHECK(misses(z, iv) == !hits(z, iv));
    // Oracle: an overlap of some interval of z with iv.
    bool overlap = false;
    for (const auto& part : z.intervals()) overlap = overlap || (part.lo <= b && a <= part.hi);
    CHECK(hits(z, iv) == overlap);
  }
  CHECK(misses(set("1/4; 1/2..3/4"), make_interval(q(1, 3), q(2, 5))));
  CHECK(hits(set("1/4; 1/2..3/4"), make_interval(q(1, 3), q(1, 2))));
}

TEST_CASE("cb_derivative examples") {
  CHECK(cb_derivative(set("1/2")).empty());
  CHECK(cb_derivative(set("0..1")) == set("0..1"));
  CHECK(cb_derivative(set("0; 1/4..1/2")) == set("1/4..1/2"));
}

TEST_CASE("property: cb_derivative agrees with the accumulation-point definition") {
  auto rng = test::rng_for(85);
  for (int trial = 0; trial < 200; ++trial) {
    const auto z = gen::closed_set(rng, 64, 4);
    const auto dz = cb_derivative(z);
    for (int i = 0; i <= 64; ++i) {
      const Rational x(i, 64);
      const bool accumulation = z.contains(x) && (near_point_in(z, x, -1) || near_point_in(z, x, 1));
      CHECK(dz.contains(x) == accumulation);
    }
    for (const auto& iv : z.intervals()) {
      for (const auto& x : {iv.lo, iv.hi}) {
        const bool accumulation = near_point_in(z, x, -1) || near_point_in(z, x, 1);
        CHECK(dz.contains(x) == accumulation);
      }
    }
    CHECK(dz.empty() == z.is_finite());
  }
}

TEST_CASE("property: cb_derivative is idempotent, shrinking and monotone") {
  auto rng = test::rng_for(86);
  for (int trial = 0; trial < 300; ++trial) {
    const auto z = gen::closed_set(rng, 32, 4);
    const auto w = set_union(z, gen::closed_set(rng, 32, 3));
    CHECK(cb_derivative(cb_derivative(z)) == cb_derivative(z));
    CHECK(is_subset(cb_derivative(z), z));
    REQUIRE(is_subset(z, w));
    CHECK(is_subset(cb_derivative(z), cb_derivative(w)));
  }
}

TEST_CASE("boundary examples") {
  CHECK(boundary(set("0..1")).empty());
  CHECK(boundary(set("1/4..1/2; 7/8")) == ClosedSet::points({q(1, 4), q(1, 2), q(7, 8)}));
  CHECK(boundary(set("0..1/2")) == set("1/2"));
  CHECK(boundary(set("1/2..1")) == set("1/2"));
  CHECK(boundary(set("0")) == set("0"));
  CHECK(boundary(ClosedSet()).empty());
}

TEST_CASE("property: boundary agrees with a neighbourhood oracle") {
  auto rng = test::rng_for(87);
  for (int trial = 0; trial < 200; ++trial) {
    const auto z = gen::closed_set(rng, 32, 4);
    const auto b = boundary(z);
    for (int i = 0; i <= 64; ++i) {
      const Rational x(i, 64);
      const bool left_out = x > 0 && !near_point_in(z, x, -1);
      const bool right_out = x < 1 && !near_point_in(z, x, 1);
      CHECK(b.contains(x) == (z.contains(x) && (left_out || right_out)));
    }
    CHECK(is_subset(b, z));
    CHECK(b.is_finite());
  }
}

TEST_CASE("count_in examples") {
  CHECK(count_in(ClosedSet::points({0, q(1, 2), 1}), make_interval(0, q(1, 2))) == Count{false, 2});
  CHECK(count_in(set("1/4..1/2"), make_interval(q(1, 3), 1)).infinite);
  CHECK(count_in(set("1/4..1/2"), make_interval(q(1, 2), 1)) == Count{false, 1});
  CHECK(count_in(ClosedSet(), make_interval(0, 1)) == Count{false, 0});
}

TEST_CASE("boundary lemma examples") {
  const auto f = set("1/4..1/2");
  // z misses the boundary and meets f in finitely many points.
  const auto z1 = ClosedSet::points({q(1, 3), q(3, 4)});
  const auto s1 = boundary_lemma_sides(z1, f);
  CHECK(s1.agree());
  CHECK(s1.derivative_misses_f);
  CHECK(s1.finite_in_f);

  const auto s2 = boundary_lemma_sides(boundary(f), f);
  CHECK(s2.agree());
  CHECK(s2.derivative_misses_interior);

  CHECK_THROWS_AS(boundary_lemma_sides(z1, set("1/3")), InvalidInput);
}

TEST_CASE("property: boundary lemma on random pairs") {
  auto rng = test::rng_for(88);
  int nontrivial = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto z = gen::closed_set(rng, 32, 4);
    const auto f = gen::closed_set_with_interior(rng, 32, 3);
    const auto sides = boundary_lemma_sides(z, f);
    CHECK(sides.agree());
    CHECK(boundary_lemma_check(z, f));
    if (!sides.finite_in_f) ++nontrivial;
  }
  CHECK(nontrivial > 0);
}

TEST_CASE("property: finite approximations are finite and close") {
  auto rng = test::rng_for(89);
  for (int trial = 0; trial < 100; ++trial) {
    const auto z = gen::closed_set(rng, 32, 4);
    for (unsigned k = 0; k <= 8; ++k) {
      const auto a = finite_approximation(z, k);
      CHECK(a.is_finite());
      CHECK(hausdorff(a, z) <= Rational(1, 1 << k));
    }
  }
}

TEST_CASE("ordering is a strict weak order on sets") {
  auto rng = test::rng_for(90);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = gen::closed_set(rng, 16, 3);
    const auto b = gen::closed_set(rng, 16, 3);
    CHECK_FALSE(a < a);
    if (a == b) {
      CHECK_FALSE(a < b);
    } else {
      CHECK((a < b) != (b < a));
    }
  }
}

TEST_CASE("random closed set laws") {
  const auto d = RandomClosedSetDist::from_atoms(
      {{set("1/2"), q(1, 3)}, {set("0..1"), q(1, 2)}, {set("1/2"), q(1, 6)}, {set("1/4"), 0}});
  REQUIRE(d.atoms().size() == 2);
  CHECK(d.prob(set("1/2")) == q(1, 2));
  CHECK(d.prob(set("0..1")) == q(1, 2));
  CHECK(d.prob(set("1/4")) == 0);
  CHECK(d.exact());

  CHECK_THROWS_AS(RandomClosedSetDist::from_atoms({{set("1/2"), q(1, 2)}}), InvalidInput);
  CHECK_THROWS_AS(RandomClosedSetDist::from_atoms({{set("1/2"), q(3, 2)}, {set("1"), q(-1, 2)}}), InvalidInput);
  const auto rounded = RandomClosedSetDist::from_atoms({{set("1/2"), rationalize(0.3, 1000000000000LL)},
                                                        {set("1"), rationalize(0.7, 1000000000000LL)}},
                                                       false);
  CHECK_FALSE(rounded.exact());

  const auto dirac = RandomClosedSetDist::dirac(ClosedSet());
  REQUIRE(dirac.atoms().size() == 1);
  CHECK(dirac.prob(ClosedSet()) == 1);
}
