#pragma once

#include <string>
#include <string_view>

#include "heightlab/arith.hpp"
#include "heightlab/polynomial.hpp"

namespace heightlab {

// "p", "-p/q"; throws ParseError on anything else (including q = 0).
Rat parse_rational(std::string_view text);

// "a/b", "a", or "inf"; throws ParseError.
ProjPoint parse_point(std::string_view text);

// Rational map in t: integer/rational coefficients, operators + - * / ^,
// parentheses, and juxtaposition like "2t". The result is normalized
// (coprime, integer-cleared); a nontrivial common factor is reported through
// *warning. Examples: "t", "5", "(t^2+1)/(2t-3)", "t/(t+1)".
RationalMap1D parse_rational_map(std::string_view text,
                                 std::string* warning = nullptr);

} // namespace heightlab
