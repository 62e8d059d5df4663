#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <utility>

#include "dvr/rational.hpp"

namespace dvr {

// A parsed polynomial expression in u and T with rational coefficients:
// keys are (u-exponent, T-exponent).
struct ParsedPoly {
  std::map<std::pair<int, Rational>, Rational> terms;
  std::optional<int> u_precision;  // from a trailing `O(u^N)`
  bool mentions_T = false;
  bool mentions_u = false;
};

// Grammar: signed sums of products of factors, where a factor is a rational
// `p` or `p/q`, `T`, `T^e`, `T^(a/b)`, `u`, `u^k`, `u^(k)`, `O(u^N)` (only as a
// whole top-level term) or a parenthesised sub-expression.  Whitespace is
// insignificant.
ParsedPoly parse_poly(std::string_view text);

}  // namespace dvr
