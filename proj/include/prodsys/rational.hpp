#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace prodsys {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders as "p/q", always with an explicit denominator ("0/1", "1/1").
std::string to_string(const Rational& r);

/// Accepts "p/q" or an integer "p". Throws InvalidInput on malformed text.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

/// Best rational approximation with denominator at most max_den
/// (continued-fraction convergents and semiconvergents).
Rational rationalize(double x, long long max_den);

}  // namespace prodsys
