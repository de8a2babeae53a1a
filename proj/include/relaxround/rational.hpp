#ifndef RELAXROUND_RATIONAL_HPP_
#define RELAXROUND_RATIONAL_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace relaxround {

// Arbitrary-precision rational. Every value in the library is exact.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// Parses "p/q", "p" or "-p/q". Throws Error(kInvalidInput) on malformed text
// or a zero denominator. The result is canonicalized.
Rational parse_rational(std::string_view text);

// Always "p/q", including integers ("3/1"), so output is bit-stable.
std::string format_rational(const Rational& value);

Rational rational_abs(const Rational& value);

// num/den in canonical form. mpq_class(num, den) alone skips
// canonicalization, which breaks equality.
Rational ratio(long num, long den);

}  // namespace relaxround

#endif  // RELAXROUND_RATIONAL_HPP_
