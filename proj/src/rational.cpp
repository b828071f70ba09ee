#include "prodsys/rational.hpp"

#include <cmath>
#include <string>

#include "prodsys/errors.hpp"

namespace prodsys {

std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) throw InvalidInput("malformed rational '" + std::string(whole) + "'");
  for (std::size_t k = i; k < text.size(); ++k) {
    if (text[k] < '0' || text[k] > '9') throw InvalidInput("malformed rational '" + std::string(whole) + "'");
  }
  BigInt v(std::string(text.substr(i)));
  return text[0] == '-' ? BigInt(-v) : v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(t, text));
  const BigInt num = parse_integer(trim(t.substr(0, slash)), text);
  const BigInt den = parse_integer(trim(t.substr(slash + 1)), text);
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rationalize(double x, long long max_den) {
  if (!std::isfinite(x)) throw InvalidInput("rationalize: non-finite value");
  if (max_den < 1) throw InvalidInput("rationalize: max_den must be positive");
  const bool negative = x < 0;
  double v = std::fabs(x);
  // Convergents p/q of the continued fraction of v.
  BigInt p0 = 0, p1 = 1;
  long long q0 = 1, q1 = 0;
  const auto value = [](const BigInt& p, long long q) { return p.convert_to<double>() / static_cast<double>(q); };
  double rem = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(rem);
    if (a_d > 9e15) break;
    const auto a = static_cast<long long>(a_d);
    if (q1 > 0 && a > (max_den - q0) / q1) {
      // Best semiconvergent within the bound, if it beats the last convergent.
      const long long k = (max_den - q0) / q1;
      const BigInt ps = k * p1 + p0;
      const long long qs = k * q1 + q0;
      if (std::fabs(v - value(ps, qs)) < std::fabs(v - value(p1, q1))) {
        p1 = ps;
        q1 = qs;
      }
      break;
    }
    const BigInt p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = rem - a_d;
    if (frac < 1e-18 || std::fabs(v - value(p1, q1)) == 0.0) break;
    rem = 1.0 / frac;
  }
  const Rational r{p1, BigInt(q1)};
  return negative ? Rational(-r) : r;
}

}  // namespace prodsys
