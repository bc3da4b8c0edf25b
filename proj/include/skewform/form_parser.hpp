#pragma once

// Text front end for forms over z1..zn.
//
// Grammar (ASCII, whitespace-insensitive):
//   expr    := ['+' | '-'] term (('+' | '-') term)*
//   term    := factor (['*'] factor)*          -- juxtaposition multiplies
//   factor  := primary ['^' uint]
//   primary := decimal | decimal 'i' | 'i' | var | '(' expr ')'
//   var     := 'z' uint                        -- 1 <= index <= n
//   decimal := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//
// A complex coefficient such as (1+2i) is a parenthesized expression.
// Products are normal-ordered under the mu relations as they are parsed, so
// "z2 z1" is legal and becomes mu_12 z1 z2.

#include <string>
#include <string_view>

#include "skewform/rank_factor.hpp"

namespace skewform {

/// Throws ParseError (with a character offset) on malformed or empty input
/// and on generator indices outside 1..n.
SkewPoly parse(std::string_view text, const MuMatrix& mu, Tolerance tol = {});

/// Throws InputError listing offending monomials unless `p` is homogeneous of degree 2.
QuadraticForm to_quadratic_form(const SkewPoly& p, Tolerance tol = {});

/// Convenience: parse then to_quadratic_form.
QuadraticForm parse_quadratic(std::string_view text, const MuMatrix& mu, Tolerance tol = {});

/// Largest k such that "zk" occurs in the text (0 if none). Lexical only.
std::size_t max_generator_index(std::string_view text);

/// Shortest decimal that reads back to the same double.
std::string format_number(double x);

/// Coefficient as it appears in printed text, e.g. "3", "-2i", "(1+2i)".
std::string format_scalar(Scalar c);

/// Canonical text: descending lexicographic exponent order, unit
/// coefficients elided, "0" for zero.
std::string print(const SkewPoly& p);
std::string print(const LinearForm& l);
std::string print(const QuadraticForm& q);
/// "(L1)(L2)", "(L)^2", "(L1)(L2) + (L3)^2", or "0".
std::string print(const Factorization& f);

}  // namespace skewform
