#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace bgkit {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Lengths and masses are both exact rationals; the aliases only document intent.
using Length = Rational;
using Mass = Rational;

// Accepts "p", "p/q", "-p/q" and plain decimals such as "0.25".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
// Natural log of a positive rational that may exceed the double range.
double log_of(const Rational& q);
Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
Rational abs_of(const Rational& q);

inline Rational make_rational(long long p, long long q = 1) { return Rational(p, q); }

}  // namespace bgkit
