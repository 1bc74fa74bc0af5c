#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace qck {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "3", "-3/4" or a plain decimal ("0.25", "7.5e-3") into an exact
// rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& token);

// "n/d", or just "n" when the denominator is 1.
std::string rational_to_string(const Rational& q);

// Scales a rational vector to the coprime integer vector pointing the same
// way (multiplication by a positive scalar only). Zero stays zero.
std::vector<Int> clear_denominators(const std::vector<Rational>& v);

// Divides all entries by their positive gcd; signs are untouched.
void normalize_gcd(std::vector<Int>& v);

}  // namespace qck
