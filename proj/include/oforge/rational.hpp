#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace oforge {

using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q" or "p" (optionally signed). Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

// Formats as "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

// Total bits across numerator and denominator; used by the elimination
// bit-size guard.
std::size_t rational_bits(const Rational& value);

inline Rational parse_rational_or_throw(const std::string& text) {
    auto r = parse_rational(text);
    if (!r) throw std::invalid_argument("malformed rational: '" + text + "'");
    return *r;
}

}  // namespace oforge
