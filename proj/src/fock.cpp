#include "prodsys/fock.hpp"

#include <algorithm>
#include <cmath>

#include "prodsys/errors.hpp"

namespace prodsys::fock {

StepFunction::StepFunction(std::size_t dim, Rational horizon, std::vector<Piece> pieces)
    : dim_(dim), horizon_(std::move(horizon)), pieces_(std::move(pieces)) {
  if (horizon_ <= 0) throw InvalidInput("step function horizon must be positive");
  Rational cursor = 0;
  for (const auto& p : pieces_) {
    if (static_cast<std::size_t>(p.value.size()) != dim_) throw InvalidInput("piece value has the wrong dimension");
    if (!(p.begin < p.end)) throw InvalidInput("pieces must be nonempty half-open intervals");
    if (p.begin < cursor) throw InvalidInput("pieces must be sorted, disjoint and start at or after 0");
    if (p.end > horizon_) throw InvalidInput("piece extends beyond the horizon");
    if (!linalg::all_finite(p.value)) throw InvalidInput("non-finite piece value");
    cursor = p.end;
  }
}

StepFunction StepFunction::zero(std::size_t dim, Rational horizon) {
  return StepFunction(dim, std::move(horizon), {});
}

StepFunction StepFunction::constant(const ComplexVector& value, Rational horizon) {
  return StepFunction(static_cast<std::size_t>(value.size()), horizon, {{Rational(0), horizon, value}});
}

StepFunction StepFunction::indicator(const ComplexVector& value, Rational begin, Rational end,
                                     Rational horizon) {
  return StepFunction(static_cast<std::size_t>(value.size()), std::move(horizon),
                      {{std::move(begin), std::move(end), value}});
}

ComplexVector StepFunction::at(const Rational& s) const {
  if (s < 0 || s >= horizon_) throw RangeError("point " + to_string(s) + " outside [0, horizon)");
  for (const auto& p : pieces_) {
    if (p.begin <= s && s < p.end) return p.value;
  }
  return ComplexVector::Zero(static_cast<Eigen::Index>(dim_));
}

StepFunction StepFunction::restrict_to(const Rational& begin, const Rational& end) const {
  if (begin < 0 || end > horizon_ || !(begin < end)) throw RangeError("restriction window outside [0, horizon)");
  std::vector<Piece> out;
  for (const auto& p : pieces_) {
    const Rational lo = std::max(p.begin, begin);
    const Rational hi = std::min(p.end, end);
    if (lo < hi) out.push_back({lo - begin, hi - begin, p.value});
  }
  return StepFunction(dim_, end - begin, std::move(out));
}

std::vector<Rational> StepFunction::breakpoints() const {
  std::vector<Rational> pts{Rational(0), horizon_};
  for (const auto& p : pieces_) {
    pts.push_back(p.begin);
    pts.push_back(p.end);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace {

void require_compatible(const StepFunction& f, const StepFunction& g) {
  if (f.horizon() != g.horizon()) throw InvalidInput("step functions have different horizons");
  if (f.dim() != g.dim()) throw InvalidInput("step functions have different dimensions");
}

}  // namespace

Complex l2_inner(const StepFunction& f, const StepFunction& g) {
  require_compatible(f, g);
  Complex acc = 0.0;
  for (const auto& p : f.pieces()) {
    for (const auto& q : g.pieces()) {
      const Rational lo = std::max(p.begin, q.begin);
      const Rational hi = std::min(p.end, q.end);
      if (lo < hi) acc += to_double(hi - lo) * p.value.dot(q.value);
    }
  }
  return acc;
}

StepFunction operator+(const StepFunction& f, const StepFunction& g) {
  require_compatible(f, g);
  std::vector<Rational> pts = f.breakpoints();
  const auto more = g.breakpoints();
  pts.insert(pts.end(), more.begin(), more.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const ComplexVector v = f.at(pts[i]) + g.at(pts[i]);
    if (v.isZero(0.0)) continue;
    if (!out.empty() && out.back().end == pts[i] && out.back().value == v) {
      out.back().end = pts[i + 1];
    } else {
      out.push_back({pts[i], pts[i + 1], v});
    }
  }
  return StepFunction(f.dim(), f.horizon(), std::move(out));
}

Complex exp_inner(const StepFunction& f, const StepFunction& g) { return std::exp(l2_inner(f, g)); }

Complex root_inner(const ComplexVector& c, const ComplexVector& d, double t) {
  if (!(t > 0.0)) throw RangeError("root_inner needs t > 0");
  if (c.size() != d.size()) throw InvalidInput("root directions have different dimensions");
  return t * c.dot(d);
}

EulerComparison euler_product(const StepFunction& g, const ComplexVector& c, const Rational& t,
                              unsigned n) {
  if (g.horizon() != t) throw InvalidInput("step function horizon differs from t");
  if (static_cast<std::size_t>(c.size()) != g.dim()) throw InvalidInput("direction has the wrong dimension");
  if (n > 40) throw RangeError("refinement above 2^40");
  const Rational step = t / Rational(BigInt(1) << n);
  const double h = to_double(step);
  EulerComparison out{1.0, 1.0, 0.0};
  const auto pts = g.breakpoints();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Rational cells = (pts[i + 1] - pts[i]) / step;
    if (denominator(cells) != 1) throw GridError("breakpoint " + to_string(pts[i + 1]) + " is off the 2^-n t grid");
    const Complex pairing = g.at(pts[i]).dot(c);
    const auto k = numerator(cells).convert_to<std::uint64_t>();
    out.product *= linalg::integer_power(1.0 + h * pairing, k);
    out.limit *= std::exp(to_double(pts[i + 1] - pts[i]) * pairing);
  }
  out.gap = std::abs(out.product - out.limit);
  return out;
}

double euler_norm_defect(const ComplexVector& c, double t, unsigned n) {
  if (!(t > 0.0)) throw RangeError("euler_norm_defect needs t > 0");
  const double u = t * c.squaredNorm();
  if (u == 0.0) return 0.0;
  const double parts = std::ldexp(1.0, static_cast<int>(n));
  // e^u - e^L with L = N log1p(u/N) <= u, written to avoid a large subtraction.
  const double log_product = parts * std::log1p(u / parts);
  return -std::expm1(log_product - u) * std::exp(u);
}

ComplexVector guichardet_eval(const StepFunction& g, const std::vector<Rational>& points) {
  ComplexVector out = ComplexVector::Ones(1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && !(points[i - 1] < points[i])) throw InvalidInput("points must be strictly increasing");
    out = linalg::kron(out, g.at(points[i]));
  }
  return out;
}

WeylAction weyl_on_coherent(const StepFunction& h, const StepFunction& k) {
  const Complex hk = l2_inner(h, k);
  return {std::exp(Complex(0.0, -hk.imag())), h + k};
}

UnitLabel label_of_slot_unit(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) throw DimensionError("units live in different slots");
  const Complex alpha = u.dot(v);
  if (std::abs(alpha) < linalg::kRankTol) throw InvalidUnit("unit is orthogonal to the reference unit");
  const linalg::Subspace perp = linalg::complement(linalg::Subspace::line(u));
  const ComplexVector x = v / alpha - u;
  return {std::log(alpha), perp.basis().adjoint() * x};
}

Complex covariance(const UnitLabel& u, const UnitLabel& v) {
  return std::conj(u.drift) + v.drift + u.direction.dot(v.direction);
}

std::size_t index_from_units(const std::vector<UnitLabel>& units) {
  if (units.empty()) throw InvalidInput("index needs at least one unit");
  const auto d = units.front().direction.size();
  for (const auto& u : units) {
    if (u.direction.size() != d) throw InvalidInput("unit directions have different dimensions");
  }
  const auto m = static_cast<Eigen::Index>(units.size());
  if (m == 1) return 0;
  linalg::ComplexMatrix gamma(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) gamma(i, j) = covariance(units[i], units[j]);
  }
  // Zero-sum functions f_j = delta_j - delta_0, j = 1..m-1.
  linalg::ComplexMatrix basis = linalg::ComplexMatrix::Zero(m, m - 1);
  for (Eigen::Index j = 1; j < m; ++j) {
    basis(0, j - 1) = -1.0;
    basis(j, j - 1) = 1.0;
  }
  linalg::ComplexMatrix form = basis.adjoint() * gamma * basis;
  form = (0.5 * (form + form.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<linalg::ComplexMatrix> es(form, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  // Cutoff relative to the covariance entries: when the form vanishes
  // algebraically its eigenvalues are pure rounding.
  const double cutoff = linalg::kRankTol * std::max(1.0, gamma.cwiseAbs().maxCoeff());
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace prodsys::fock
