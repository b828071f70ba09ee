#include "prodsys/hyperspace.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "prodsys/errors.hpp"

namespace prodsys::hyperspace {

Interval make_interval(Rational lo, Rational hi) {
  if (lo < 0 || hi > 1 || lo > hi) {
    throw RangeError("interval [" + to_string(lo) + ", " + to_string(hi) + "] not a closed subinterval of [0,1]");
  }
  return {std::move(lo), std::move(hi)};
}

ClosedSet ClosedSet::normalize(std::vector<Interval> raw) {
  for (const auto& iv : raw) make_interval(iv.lo, iv.hi);
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  ClosedSet out;
  for (auto& iv : raw) {
    if (!out.intervals_.empty() && iv.lo <= out.intervals_.back().hi) {
      if (iv.hi > out.intervals_.back().hi) out.intervals_.back().hi = iv.hi;
    } else {
      out.intervals_.push_back(std::move(iv));
    }
  }
  return out;
}

ClosedSet ClosedSet::point(const Rational& x) { return normalize({{x, x}}); }

ClosedSet ClosedSet::points(const std::vector<Rational>& xs) {
  std::vector<Interval> raw;
  for (const auto& x : xs) raw.push_back({x, x});
  return normalize(std::move(raw));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

ClosedSet ClosedSet::parse(std::string_view text) {
  std::vector<Interval> raw;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto semi = text.find(';', start);
    const auto token = trim(text.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
    if (!token.empty()) {
      const auto dots = token.find("..");
      if (dots == std::string_view::npos) {
        const Rational x = parse_rational(token);
        raw.push_back({x, x});
      } else {
        raw.push_back({parse_rational(token.substr(0, dots)), parse_rational(token.substr(dots + 2))});
      }
    } else if (semi != std::string_view::npos) {
      throw InvalidInput("empty interval token in '" + std::string(text) + "'");
    }
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return normalize(std::move(raw));
}

std::string ClosedSet::to_text() const {
  std::string out;
  for (const auto& iv : intervals_) {
    if (!out.empty()) out += "; ";
    out += to_string(iv.lo) + ".." + to_string(iv.hi);
  }
  return out;
}

bool ClosedSet::contains(const Rational& x) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [&x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; });
}

bool ClosedSet::is_finite() const {
  return std::all_of(intervals_.begin(), intervals_.end(), [](const Interval& iv) { return iv.lo == iv.hi; });
}

bool operator<(const ClosedSet& a, const ClosedSet& b) {
  return std::lexicographical_compare(
      a.intervals_.begin(), a.intervals_.end(), b.intervals_.begin(), b.intervals_.end(),
      [](const Interval& x, const Interval& y) { return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi); });
}

bool is_subset(const ClosedSet& z, const ClosedSet& w) {
  for (const auto& iv : z.intervals()) {
    const bool inside = std::any_of(w.intervals().begin(), w.intervals().end(),
                                    [&iv](const Interval& o) { return o.lo <= iv.lo && iv.hi <= o.hi; });
    if (!inside) return false;
  }
  return true;
}

ClosedSet set_union(const ClosedSet& a, const ClosedSet& b) {
  std::vector<Interval> raw = a.intervals();
  raw.insert(raw.end(), b.intervals().begin(), b.intervals().end());
  return ClosedSet::normalize(std::move(raw));
}

Rational distance(const Rational& x, const ClosedSet& z) {
  if (z.empty()) throw InvalidInput("distance to the empty set");
  std::optional<Rational> best;
  for (const auto& iv : z.intervals()) {
    Rational d = 0;
    if (x < iv.lo) d = iv.lo - x;
    else if (x > iv.hi) d = x - iv.hi;
    if (!best || d < *best) best = d;
  }
  return *best;
}

Rational directed_hausdorff(const ClosedSet& a, const ClosedSet& b) {
  if (a.empty() || b.empty()) throw InvalidInput("directed Hausdorff distance needs nonempty sets");
  // dist(., b) is piecewise linear on each interval of a; its maxima sit at
  // the interval endpoints or at midpoints of the gaps of b.
  std::vector<Rational> candidates;
  for (const auto& iv : a.intervals()) {
    candidates.push_back(iv.lo);
    candidates.push_back(iv.hi);
  }
  const auto& bi = b.intervals();
  for (std::size_t i = 0; i + 1 < bi.size(); ++i) {
    const Rational mid = (bi[i].hi + bi[i + 1].lo) / 2;
    if (a.contains(mid)) candidates.push_back(mid);
  }
  Rational best = 0;
  for (const auto& x : candidates) best = std::max(best, distance(x, b));
  return best;
}

Rational hausdorff(const ClosedSet& a, const ClosedSet& b) {
  if (a.empty() && b.empty()) return 0;
  if (a.empty() || b.empty()) return 1;
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

bool hits(const ClosedSet& z, const Interval& q) {
  make_interval(q.lo, q.hi);
  return std::any_of(z.intervals().begin(), z.intervals().end(),
                     [&q](const Interval& iv) { return iv.lo <= q.hi && q.lo <= iv.hi; });
}

ClosedSet cb_derivative(const ClosedSet& z) {
  std::vector<Interval> kept;
  for (const auto& iv : z.intervals()) {
    if (iv.lo < iv.hi) kept.push_back(iv);
  }
  return ClosedSet::normalize(std::move(kept));
}

ClosedSet boundary(const ClosedSet& z) {
  std::vector<Rational> pts;
  for (const auto& iv : z.intervals()) {
    if (iv.lo == iv.hi) {
      pts.push_back(iv.lo);
      continue;
    }
    if (iv.lo != 0) pts.push_back(iv.lo);
    if (iv.hi != 1) pts.push_back(iv.hi);
  }
  return ClosedSet::points(pts);
}

namespace {

// An interval of [0,1] whose ends may be open.
struct Span {
  Rational lo;
  Rational hi;
  bool lo_closed;
  bool hi_closed;
};

// Cardinality of the intersection of two spans: 0, 1 or infinite.
Count span_overlap(const Span& a, const Span& b) {
  Rational lo = a.lo;
  bool lo_closed = a.lo_closed;
  if (b.lo > lo || (b.lo == lo && !b.lo_closed)) {
    lo_closed = b.lo > lo ? b.lo_closed : false;
    lo = b.lo;
  }
  Rational hi = a.hi;
  bool hi_closed = a.hi_closed;
  if (b.hi < hi || (b.hi == hi && !b.hi_closed)) {
    hi_closed = b.hi < hi ? b.hi_closed : false;
    hi = b.hi;
  }
  if (lo < hi) return {true, 0};
  if (lo == hi && lo_closed && hi_closed) return {false, 1};
  return {false, 0};
}

Count count_against(const ClosedSet& z, const std::vector<Span>& region) {
  Count total;
  for (const auto& iv : z.intervals()) {
    const Span zs{iv.lo, iv.hi, true, true};
    for (const auto& r : region) {
      const Count c = span_overlap(zs, r);
      if (c.infinite) return {true, 0};
      total.value += c.value;
    }
  }
  return total;
}

std::vector<Span> closed_spans(const ClosedSet& f) {
  std::vector<Span> out;
  for (const auto& iv : f.intervals()) out.push_back({iv.lo, iv.hi, true, true});
  return out;
}

// Interior relative to [0,1]: open intervals, closed at 0 and 1.
std::vector<Span> interior_spans(const ClosedSet& f) {
  std::vector<Span> out;
  for (const auto& iv : f.intervals()) {
    if (iv.lo < iv.hi) out.push_back({iv.lo, iv.hi, iv.lo == 0, iv.hi == 1});
  }
  return out;
}

}  // namespace

Count count_in(const ClosedSet& z, const Interval& q) {
  make_interval(q.lo, q.hi);
  return count_against(z, {{q.lo, q.hi, true, true}});
}

BoundaryLemmaSides boundary_lemma_sides(const ClosedSet& z, const ClosedSet& f) {
  const auto interior = interior_spans(f);
  if (interior.empty()) throw InvalidInput("boundary lemma needs F with nonempty interior");
  const auto closed = closed_spans(f);
  const ClosedSet dz = cb_derivative(z);
  const ClosedSet df = boundary(f);
  const auto misses = [](const Count& c) { return !c.infinite && c.value == 0; };
  const bool hits_boundary = !misses(count_against(z, closed_spans(df)));
  BoundaryLemmaSides s;
  s.derivative_misses_f = misses(count_against(dz, closed)) || hits_boundary;
  s.finite_in_f = !count_against(z, closed).infinite || hits_boundary;
  s.finite_in_interior = !count_against(z, interior).infinite || hits_boundary;
  s.derivative_misses_interior = misses(count_against(dz, interior)) || hits_boundary;
  return s;
}

bool boundary_lemma_check(const ClosedSet& z, const ClosedSet& f) {
  return boundary_lemma_sides(z, f).agree();
}

ClosedSet finite_approximation(const ClosedSet& z, unsigned k) {
  const Rational eps(BigInt(1), BigInt(1) << k);
  std::vector<Rational> pts;
  for (const auto& iv : z.intervals()) {
    for (Rational x = iv.lo; x < iv.hi; x += eps) pts.push_back(x);
    pts.push_back(iv.hi);
  }
  return ClosedSet::points(pts);
}

RandomClosedSetDist RandomClosedSetDist::from_atoms(std::vector<Atom> atoms, bool exact) {
  std::map<ClosedSet, Rational> merged;
  for (auto& [set, p] : atoms) {
    if (p < 0) throw InvalidInput("negative probability for atom '" + set.to_text() + "'");
    merged[set] += p;
  }
  RandomClosedSetDist d;
  d.exact_ = exact;
  Rational total = 0;
  for (auto& [set, p] : merged) {
    total += p;
    if (p > 0) d.atoms_.emplace_back(set, p);
  }
  if (exact ? total != 1 : std::abs(to_double(total) - 1.0) > 1e-10) {
    throw InvalidInput("probabilities sum to " + to_string(total) + ", not 1");
  }
  return d;
}

RandomClosedSetDist RandomClosedSetDist::dirac(ClosedSet z) { return from_atoms({{std::move(z), Rational(1)}}); }

Rational RandomClosedSetDist::prob(const ClosedSet& z) const {
  for (const auto& [set, p] : atoms_) {
    if (set == z) return p;
  }
  return 0;
}

}  // namespace prodsys::hyperspace
